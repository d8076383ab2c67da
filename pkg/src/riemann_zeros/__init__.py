"""High-precision nontrivial Riemann zeros.

Solves the transcendental equations whose n-th root is the n-th zero on
the critical line, then feeds the solved ordinates into pair-correlation
statistics and the explicit formula for prime counting.
"""

from .config import load_run_config
from .data_loader import OrdinateLoader
from .errors import (
    BracketError,
    CacheIntegrityError,
    ConvergenceError,
    DomainError,
    MisindexError,
    MissingZerosError,
    NearZeroWarning,
    PoleError,
    PrecisionError,
    ResourceLimitError,
    RiemannZerosError,
    TableTooSmallError,
)
from .models import (
    CorrelationBin,
    OutputFormat,
    PrimeReconstruction,
    RunConfig,
    SolverConfig,
    SpacingSeries,
    ZeroMethod,
    ZeroRecord,
)
from .precision import PrecisionContext
from .report import ReportWriter
from .store import ZeroCacheFile
from .zero_solver import (
    CountingVariant,
    lambert_seed,
    solve_range,
    solve_zero,
    solve_zero_asymptotic,
    solve_zero_exact,
)

__all__ = [
    'BracketError',
    'CacheIntegrityError',
    'ConvergenceError',
    'CorrelationBin',
    'CountingVariant',
    'DomainError',
    'MisindexError',
    'MissingZerosError',
    'NearZeroWarning',
    'OrdinateLoader',
    'OutputFormat',
    'PoleError',
    'PrecisionContext',
    'PrecisionError',
    'PrimeReconstruction',
    'ReportWriter',
    'ResourceLimitError',
    'RiemannZerosError',
    'RunConfig',
    'SolverConfig',
    'SpacingSeries',
    'TableTooSmallError',
    'ZeroCacheFile',
    'ZeroMethod',
    'ZeroRecord',
    'lambert_seed',
    'load_run_config',
    'solve_range',
    'solve_zero',
    'solve_zero_asymptotic',
    'solve_zero_exact',
]
