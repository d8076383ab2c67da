"""Riemann's explicit formula: rebuild J(x), pi(x) and psi(x) from zeros.

    J(x)   = Li(x) - sum_rho Ei(rho log x) + int_x^inf dt/(t(t^2-1) log t) - log 2
    pi(x)  = sum_n mu(n)/n J(x^(1/n))
    psi(x) = x - sum_rho x^rho/rho - log 2pi - (1/2) log(1 - x^-2)

Each zero rho = 1/2 + iy is paired with its conjugate so the sum is real.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import DomainError, PrecisionError, TableTooSmallError
from .models import PrimeReconstruction, ZeroRecord
from .precision import PrecisionContext
from .special_functions import ArithmeticFunctionTable, exp_integral_ei
from .utils import half_integer_grid, integer_root_floor


logger = logging.getLogger(__name__)

PAIR_TOLERANCE = 1e-8
PSI_PAIR_TOLERANCE = 1e-10


def _check_x(x: float) -> float:
    x = float(x)
    if x <= 1:
        raise DomainError(f"x must exceed 1, got {x}")
    return x


def _ordinates(zeros: Sequence[ZeroRecord], ctx: PrecisionContext) -> list:
    return [record.ordinate(ctx) for record in sorted(zeros, key=lambda r: r.value)]


def tail_integral(x: float) -> float:
    """int_x^inf dt / (t (t^2 - 1) log t), integrated in u with t = x e^u.

    Raises:
        DomainError: If x <= 1
    """
    x = _check_x(x)
    log_x = math.log(x)

    def integrand(u):
        return 1.0 / (np.expm1(2 * (log_x + u)) * (log_x + u))

    value, _ = integrate.quad(integrand, 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return value


def j_from_zeros(x: float, zeros: Sequence[ZeroRecord], ctx: PrecisionContext) -> float:
    """J(x) from a finite list of zeros.

    Args:
        x: Abscissa, x > 1
        zeros: Zero records, each standing for rho and its conjugate
        ctx: Precision context for Ei

    Returns:
        Reconstructed J(x)

    Raises:
        DomainError: If x <= 1
        PrecisionError: If a conjugate pair fails to cancel to a real value
    """
    x = _check_x(x)
    mp = ctx.mp
    log_x = mp.log(mp.mpf(x))
    total = exp_integral_ei(log_x, ctx)

    half = mp.mpf(0.5)
    for y in _ordinates(zeros, ctx):
        pair = exp_integral_ei(mp.mpc(half, y) * log_x, ctx) + exp_integral_ei(mp.mpc(half, -y) * log_x, ctx)
        if abs(pair.imag) > PAIR_TOLERANCE:
            raise PrecisionError(
                f"Ei pair at y={mp.nstr(y, 12)} left imaginary residue {mp.nstr(pair.imag, 3)}"
            )
        total -= pair.real

    return float(total) + tail_integral(x) - math.log(2)


def psi_from_zeros(x: float, zeros: Sequence[ZeroRecord], ctx: PrecisionContext) -> float:
    """Chebyshev psi(x) from a finite list of zeros.

    Raises:
        DomainError: If x <= 1
        PrecisionError: If a conjugate pair fails to cancel to a real value
    """
    x = _check_x(x)
    mp = ctx.mp
    xx = mp.mpf(x)
    total = xx - mp.log(2 * mp.pi) - mp.log(1 - xx ** -2) / 2

    half = mp.mpf(0.5)
    for y in _ordinates(zeros, ctx):
        rho = mp.mpc(half, y)
        conjugate = mp.mpc(half, -y)
        pair = xx ** rho / rho + xx ** conjugate / conjugate
        if abs(pair.imag) > PSI_PAIR_TOLERANCE:
            raise PrecisionError(
                f"x^rho/rho pair at y={mp.nstr(y, 12)} left imaginary residue {mp.nstr(pair.imag, 3)}"
            )
        total -= pair.real
    return float(total)


def pi_from_j(x: float, j: Callable[[float], object], tables: ArithmeticFunctionTable):
    """pi(x) = sum_n mu(n)/n J(x^(1/n)), stopping once x^(1/n) < 2.

    With an exact J (returning Fractions) the result is exact.

    Raises:
        DomainError: If x < 2
        TableTooSmallError: If mu(n) is needed beyond the table
    """
    x = float(x)
    if x < 2:
        raise DomainError(f"x must be >= 2, got {x}")
    total = 0
    n = 1
    while True:
        root = x ** (1.0 / n)
        if root < 2:
            break
        if n > tables.limit:
            raise TableTooSmallError(f"mu({n}) is beyond the table limit {tables.limit}")
        mu = tables.mobius(n)
        if mu:
            total += Fraction(mu, n) * j(root)
        n += 1
    return total


def pi_oracle(x: float, tables: ArithmeticFunctionTable) -> int:
    """Number of primes <= x from the sieve."""
    if x < 2:
        return 0
    return tables.prime_count(math.floor(x))


def j_oracle(x: float, tables: ArithmeticFunctionTable) -> Fraction:
    """J(x) = sum_{k>=1} pi(x^(1/k))/k as an exact fraction."""
    total = Fraction(0)
    k = 1
    while True:
        root = integer_root_floor(x, k)
        if root < 2:
            return total
        total += Fraction(pi_oracle(root, tables), k)
        k += 1


def psi_oracle(x: float, tables: ArithmeticFunctionTable) -> float:
    """psi(x) = sum of Lambda(n) for n <= x from the sieve."""
    if x < 2:
        return 0.0
    return tables.chebyshev_psi(math.floor(x))


def _check_range(x_lo: float, x_hi: float, tables: ArithmeticFunctionTable) -> None:
    if not 2 <= x_lo < x_hi:
        raise DomainError(f"need 2 <= x_lo < x_hi, got ({x_lo}, {x_hi})")
    if x_hi > tables.limit:
        raise TableTooSmallError(f"x_hi = {x_hi} exceeds the table limit {tables.limit}")


def reconstruct_on(xs: Sequence[float], zeros: Sequence[ZeroRecord], ctx: PrecisionContext,
                   tables: ArithmeticFunctionTable) -> PrimeReconstruction:
    """Reconstruct J, pi and psi at the given abscissae with their oracle values."""
    zeros = list(zeros)
    j_cache: Dict[float, float] = {}

    def j(t: float) -> float:
        if t not in j_cache:
            j_cache[t] = j_from_zeros(t, zeros, ctx)
        return j_cache[t]

    methods = {record.method for record in zeros}
    source = next(iter(methods)) if len(methods) == 1 else None

    rec = PrimeReconstruction(
        xs=[float(x) for x in xs],
        j_vals=[j(float(x)) for x in xs],
        pi_vals=[float(pi_from_j(x, j, tables)) for x in xs],
        psi_vals=[psi_from_zeros(x, zeros, ctx) for x in xs],
        zero_count=len(zeros),
        source=source,
        j_true=[float(j_oracle(x, tables)) for x in xs],
        pi_true=[pi_oracle(x, tables) for x in xs],
        psi_true=[psi_oracle(x, tables) for x in xs],
    )
    label = source.value if source else "mixed"
    logger.info(f"Reconstructed {len(rec.xs)} samples from {rec.zero_count} zeros ({label})")
    return rec


def reconstruct_figure(x_lo: float, x_hi: float, samples: int, zeros: Sequence[ZeroRecord],
                       ctx: PrecisionContext, tables: ArithmeticFunctionTable) -> PrimeReconstruction:
    """Reconstruction on a uniform grid of ``samples`` points in [x_lo, x_hi].

    Args:
        x_lo: Left end, >= 2
        x_hi: Right end, <= tables.limit
        samples: Grid size, >= 2
        zeros: Ordinates to use (seed or solved); may be empty
        ctx: Precision context
        tables: Sieve tables for mu and the oracles
    """
    _check_range(x_lo, x_hi, tables)
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples}")
    xs = np.linspace(x_lo, x_hi, samples)
    return reconstruct_on(xs, zeros, ctx, tables)


def reconstruct_comparison(x_lo: float, x_hi: float, samples: int, seeds: Sequence[ZeroRecord],
                           solved: Sequence[ZeroRecord], ctx: PrecisionContext,
                           tables: ArithmeticFunctionTable) -> Tuple[PrimeReconstruction, PrimeReconstruction]:
    """The same grid reconstructed from Lambert seeds and from solved zeros."""
    if len(seeds) != len(solved):
        raise DomainError(f"seed and solved lists differ in length ({len(seeds)} vs {len(solved)})")
    return (
        reconstruct_figure(x_lo, x_hi, samples, seeds, ctx, tables),
        reconstruct_figure(x_lo, x_hi, samples, solved, ctx, tables),
    )


def reconstruction_error(zeros: Sequence[ZeroRecord], ctx: PrecisionContext,
                         tables: ArithmeticFunctionTable, x_lo: float = 2.0,
                         x_hi: float = 100.0, what: str = "pi") -> Dict[str, float]:
    """Maximum and L2 deviation from the oracle at the half-integers in [x_lo, x_hi].

    Args:
        what: One of 'pi', 'psi', 'j'
    """
    _check_range(x_lo, x_hi, tables)
    xs = half_integer_grid(x_lo, x_hi)
    zeros = list(zeros)
    if what == "psi":
        pairs = [(psi_from_zeros(x, zeros, ctx), psi_oracle(x, tables)) for x in xs]
    elif what == "j":
        pairs = [(j_from_zeros(x, zeros, ctx), float(j_oracle(x, tables))) for x in xs]
    elif what == "pi":
        def j(t: float) -> float:
            return j_from_zeros(t, zeros, ctx)
        pairs = [(float(pi_from_j(x, j, tables)), pi_oracle(x, tables)) for x in xs]
    else:
        raise DomainError(f"what must be one of pi, psi, j; got {what!r}")

    deviations = np.array([rec - true for rec, true in pairs], dtype=np.float64)
    return {
        "max": float(np.max(np.abs(deviations))),
        "l2": float(np.sqrt(np.sum(deviations ** 2))),
        "samples": len(xs),
    }


def series_for(what: str, rec: PrimeReconstruction) -> List[Tuple[float, float, float]]:
    """(x, reconstructed, oracle) rows of one reconstructed function."""
    columns = {
        "pi": (rec.pi_vals, rec.pi_true),
        "psi": (rec.psi_vals, rec.psi_true),
        "j": (rec.j_vals, rec.j_true),
    }
    if what not in columns:
        raise DomainError(f"what must be one of pi, psi, j; got {what!r}")
    values, truth = columns[what]
    return [(x, float(v), float(t)) for x, v, t in zip(rec.xs, values, truth)]
