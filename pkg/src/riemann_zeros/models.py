"""Pydantic models for solved zeros, solver settings, statistics and run configuration."""

from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ZeroMethod(str, Enum):
    """How an ordinate was obtained."""
    LAMBERT_SEED = "lambert_seed"
    ASYMPTOTIC = "asymptotic_eq"
    EXACT = "exact_eq"
    IMPORTED = "imported"


class OutputFormat(str, Enum):
    """Output formats understood by the command line."""
    CSV = "csv"
    JSON = "json"
    PLAIN = "plain"


def _parse_decimal(value: str) -> Decimal:
    try:
        parsed = Decimal(value)
    except (InvalidOperation, TypeError):
        raise ValueError(f"not a decimal string: {value!r}")
    if not parsed.is_finite():
        raise ValueError(f"ordinate must be finite: {value!r}")
    return parsed


def _check_schedule(schedule: List[float]) -> List[float]:
    if not schedule:
        raise ValueError("delta_schedule must not be empty")
    if any(d <= 0 for d in schedule):
        raise ValueError("delta must stay strictly positive")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("delta_schedule must be strictly decreasing")
    if schedule[0] >= 1e-2:
        raise ValueError("delta must be below 1e-2")
    return schedule


class ZeroRecord(BaseModel):
    """One solved (or estimated) nontrivial zero rho_n = 1/2 + i*y_n."""
    n: int = Field(..., ge=1, description="Zero index, n = 1 at y ~ 14.1347")
    y: str = Field(..., description="Ordinate as a decimal string at full working precision")
    digits_certified: int = Field(0, ge=0, description="Significant digits known to be correct")
    method: ZeroMethod = Field(..., description="Equation or source that produced the ordinate")
    residual: Optional[float] = Field(
        None,
        ge=0,
        description="|LHS - RHS| of the solved equation at the final delta"
    )
    delta: Optional[float] = Field(None, gt=0, description="Final shift off the critical line")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "n": 1,
                "y": "14.134725141734693790457251983562470270784",
                "digits_certified": 40,
                "method": "exact_eq",
                "residual": 3.1e-44,
                "delta": 1e-21,
            }
        },
    )

    @field_validator("y")
    @classmethod
    def _positive_ordinate(cls, value: str) -> str:
        value = value.strip()
        if _parse_decimal(value) <= 0:
            raise ValueError(f"ordinate must be positive, got {value}")
        return value

    @property
    def value(self) -> float:
        """Ordinate as a double (for statistics and plotting)."""
        return float(self.y)

    def ordinate(self, ctx):
        """Ordinate as an mpf in the given precision context."""
        return ctx.mpf(self.y)


class SolverConfig(BaseModel):
    """Delta schedule, bracket policy and tolerances for the zero solvers."""
    delta_schedule: List[float] = Field(
        default_factory=lambda: [1e-5, 1e-8, 1e-11],
        description="Decreasing shifts off the critical line; the last entry is the final delta"
    )
    delta_step: float = Field(
        1e-3, gt=0, lt=1,
        description="Factor applied to extend the schedule once it is exhausted"
    )
    max_stages: int = Field(60, ge=1, description="Cap on the extended schedule length")
    bracket_halfwidth_factor: float = Field(
        0.45, gt=0,
        description="Initial bracket half-width as a fraction of the local mean spacing"
    )
    bracket_growth: float = Field(1.5, gt=1, description="Geometric growth of the bracket step")
    max_bracket_expansions: int = Field(20, ge=0)
    brent_tol: float = Field(1e-13, gt=0, description="Absolute abscissa tolerance of Brent's method")
    max_iterations: int = Field(400, ge=1, description="Brent iteration cap per solve")
    target_digits: int = Field(30, ge=5, description="Agreement required between exact stages")
    close_pair_retries: int = Field(2, ge=0, description="Delta reductions tried on bracket failure")
    max_index: int = Field(10 ** 6, ge=1, description="Largest n the solvers accept")

    @field_validator("delta_schedule")
    @classmethod
    def _strictly_decreasing(cls, schedule: List[float]) -> List[float]:
        return _check_schedule(schedule)

    @property
    def final_delta(self) -> float:
        return self.delta_schedule[-1]

    def extended_schedule(self) -> List[float]:
        """The configured schedule continued by ``delta_step`` up to ``max_stages`` entries."""
        schedule = list(self.delta_schedule)
        while len(schedule) < self.max_stages:
            schedule.append(schedule[-1] * self.delta_step)
        return schedule[: max(self.max_stages, len(self.delta_schedule))]


class CorrelationBin(BaseModel):
    """One (alpha, beta] bin of the pair-correlation comparison."""
    alpha: float = Field(..., ge=0)
    beta: float
    empirical: float = Field(..., ge=0, description="Normalized pair count in the bin")
    gue: float = Field(..., ge=0, le=1.2, description="Bin average of 1 - (sin(pi u)/(pi u))^2")

    @model_validator(mode="after")
    def _ordered(self) -> "CorrelationBin":
        if self.beta <= self.alpha:
            raise ValueError(f"beta ({self.beta}) must exceed alpha ({self.alpha})")
        return self

    @property
    def x_mid(self) -> float:
        return 0.5 * (self.alpha + self.beta)


class SpacingSeries(BaseModel):
    """Normalized spacings delta_n for n in [M, N]."""
    M: int = Field(..., ge=1)
    N: int
    deltas: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _consistent(self) -> "SpacingSeries":
        if self.N <= self.M:
            raise ValueError(f"N ({self.N}) must exceed M ({self.M})")
        if len(self.deltas) != self.N - self.M + 1:
            raise ValueError(
                f"expected {self.N - self.M + 1} spacings, got {len(self.deltas)}"
            )
        if np.any(self.deltas <= 0):
            raise ValueError("normalized spacings must be positive")
        return self

    @property
    def mean(self) -> float:
        return float(np.mean(self.deltas))


class PrimeReconstruction(BaseModel):
    """Explicit-formula reconstruction of J, pi and psi on a grid of x values."""
    xs: List[float]
    j_vals: List[float]
    pi_vals: List[float]
    psi_vals: List[float]
    zero_count: int = Field(..., ge=0)
    source: Optional[ZeroMethod] = Field(None, description="Origin of the ordinates used, when uniform")
    j_true: List[float]
    pi_true: List[int]
    psi_true: List[float]

    def to_frame(self) -> pd.DataFrame:
        """Tabulate the reconstruction next to its oracle values."""
        return pd.DataFrame({
            "x": self.xs,
            "j": self.j_vals,
            "j_true": self.j_true,
            "pi": self.pi_vals,
            "pi_true": self.pi_true,
            "psi": self.psi_vals,
            "psi_true": self.psi_true,
        })


class CacheHeader(BaseModel):
    """Header of a zero cache file."""
    format_version: int = Field(1, ge=1)
    digits: int = Field(..., ge=15)
    method: ZeroMethod


class RunConfig(BaseModel):
    """Settings shared by every command line invocation."""
    digits: int = Field(30, ge=15, description="Working decimal digits")
    delta_schedule: List[float] = Field(default_factory=lambda: [1e-5, 1e-8, 1e-11])
    n_range: Tuple[int, int] = Field((1, 100), description="Default index range for batch runs")
    output_format: OutputFormat = OutputFormat.CSV
    cache_path: Path = Field(
        default_factory=lambda: Path.home() / ".cache" / "riemann-zeros",
        description="Directory holding the zero cache files"
    )
    jobs: int = Field(1, ge=1, description="Worker processes for batch solving")
    verbose: bool = Field(False, description="Log at DEBUG level")

    @field_validator("n_range")
    @classmethod
    def _non_empty(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        lo, hi = value
        if lo < 1 or hi < lo:
            raise ValueError(f"n_range must satisfy 1 <= lo <= hi, got {value}")
        return value

    @field_validator("delta_schedule")
    @classmethod
    def _valid_schedule(cls, schedule: List[float]) -> List[float]:
        return _check_schedule(schedule)

    def solver_config(self, **overrides) -> SolverConfig:
        """Build the solver settings implied by this run configuration."""
        settings = {"delta_schedule": self.delta_schedule, "target_digits": self.digits}
        settings.update(overrides)
        return SolverConfig(**settings)
