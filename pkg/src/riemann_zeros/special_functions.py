"""Arbitrary-precision building blocks: log-gamma, Riemann-Siegel theta,
Lambert W, the exponential integral, and sieve tables for mu and Lambda.

All real and complex arithmetic runs inside the mpmath context owned by
the caller's PrecisionContext. mpmath's own gamma, lambertw and ei are not
used here; they serve as independent oracles in the tests.
"""

import logging
import math
import threading
from fractions import Fraction
from typing import List, Tuple

import mpmath
import numpy as np

from .errors import DomainError, PoleError, PrecisionError, ResourceLimitError, TableTooSmallError
from .precision import PrecisionContext


logger = logging.getLogger(__name__)

SIEVE_CAP = 10 ** 7
HALLEY_MAX_ITERATIONS = 100
LN10 = math.log(10)

# B_2j and B_2j/(2j)! as exact fractions; entry j-1 holds index j.
_BERNOULLI: List[Tuple[Fraction, Fraction]] = []
_BERNOULLI_LOCK = threading.Lock()


def _bernoulli_entry(j: int) -> Tuple[Fraction, Fraction]:
    if j < 1:
        raise DomainError(f"Bernoulli index must be >= 1, got {j}")
    if j > len(_BERNOULLI):
        with _BERNOULLI_LOCK:
            while len(_BERNOULLI) < j:
                k = 2 * (len(_BERNOULLI) + 1)
                p, q = mpmath.bernfrac(k)
                number = Fraction(int(p), int(q))
                _BERNOULLI.append((number, number / math.factorial(k)))
    return _BERNOULLI[j - 1]


def _as_mpf(value: Fraction, ctx: PrecisionContext):
    return ctx.mp.mpf(value.numerator) / value.denominator


def bernoulli_number(j: int, ctx: PrecisionContext):
    """B_{2j} in the given context (cached as an exact fraction)."""
    return _as_mpf(_bernoulli_entry(j)[0], ctx)


def bernoulli_ratio(j: int, ctx: PrecisionContext):
    """B_{2j} / (2j)! in the given context (cached as an exact fraction)."""
    return _as_mpf(_bernoulli_entry(j)[1], ctx)


def _is_complex(value) -> bool:
    return isinstance(value, complex) or type(value).__name__ == "mpc"


# ---------------------------------------------------------------------------
# Gamma and theta
# ---------------------------------------------------------------------------

def _stirling(w, ctx: PrecisionContext):
    """Stirling series for log Gamma(w); |w| must be large enough for ctx.dps."""
    mp = ctx.mp
    tol = mp.mpf(10) ** (-ctx.dps)
    result = (w - mp.mpf(0.5)) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    w2 = w * w
    power = w
    previous = mp.inf
    for j in range(1, 4 * ctx.dps + 10):
        term = bernoulli_number(j, ctx) / ((2 * j) * (2 * j - 1) * power)
        magnitude = abs(term)
        if magnitude > previous:
            raise PrecisionError(f"Stirling series diverged at |w| = {mp.nstr(abs(w), 8)}")
        result += term
        if magnitude <= tol * max(1, abs(result)):
            return result
        previous = magnitude
        power *= w2
    raise PrecisionError(f"Stirling series did not converge at |w| = {mp.nstr(abs(w), 8)}")


def log_gamma(z, ctx: PrecisionContext):
    """Principal-branch log Gamma(z).

    The argument is shifted right by r steps until the Stirling series
    converges at the working precision, then the shift is undone with
    log Gamma(z) = log Gamma(z + r) - sum_k log(z + k). Summing principal
    logarithms gives the branch that is continuous everywhere off the
    negative real axis, so Im log Gamma(1/4 + it/2) varies continuously in t.

    Args:
        z: Complex (or real) argument
        ctx: Precision context

    Returns:
        log Gamma(z) as an mpc

    Raises:
        PoleError: If z is 0 or a negative integer
    """
    mp = ctx.mp
    z = mp.mpc(z)
    if z.imag == 0 and z.real <= 0 and mp.isint(z.real):
        raise PoleError(f"Gamma has a pole at z = {mp.nstr(z.real, 10)}")

    radius = 0.4 * ctx.dps + 2
    x = float(z.real)
    y = abs(float(z.imag))
    if y >= radius:
        shift = max(0, math.ceil(-x) + 1) if x < 0 else 0
    else:
        shift = max(0, math.ceil(math.sqrt(radius * radius - y * y) - x))

    result = _stirling(z + shift, ctx)
    if shift:
        result -= mp.fsum(mp.log(z + k) for k in range(shift))
    return result


def riemann_siegel_theta(t, ctx: PrecisionContext):
    """Riemann-Siegel theta(t) = arg Gamma(1/4 + it/2) - t log(sqrt(pi)).

    The argument of Gamma is the imaginary part of the continuous log Gamma
    branch, so theta is continuous with theta(0) = 0.

    Args:
        t: Height t >= 0
        ctx: Precision context

    Returns:
        theta(t) as an mpf

    Raises:
        DomainError: If t < 0
    """
    mp = ctx.mp
    t = mp.mpf(t)
    if t < 0:
        raise DomainError(f"theta is evaluated for t >= 0, got {mp.nstr(t, 10)}")
    if t == 0:
        return mp.mpf(0)
    return log_gamma(mp.mpc(mp.mpf(1) / 4, t / 2), ctx).imag - t * mp.log(mp.pi) / 2


def theta_asymptotic(t, ctx: PrecisionContext):
    """Large-t expansion (t/2) log(t/2 pi e) - pi/8 + 1/(48 t) + 7/(5760 t^3)."""
    mp = ctx.mp
    t = mp.mpf(t)
    if t <= 0:
        raise DomainError(f"asymptotic theta needs t > 0, got {mp.nstr(t, 10)}")
    return (t / 2) * mp.log(t / (2 * mp.pi * mp.e)) - mp.pi / 8 + 1 / (48 * t) + 7 / (5760 * t ** 3)


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------

def _lambert_initial_guess(x, mp):
    if x > mp.e:
        l1 = mp.log(x)
        l2 = mp.log(l1)
        return l1 - l2 + l2 / l1
    if x < mp.mpf(-0.3):
        p = mp.sqrt(2 * (mp.e * x + 1))
        return -1 + p - p ** 2 / 3 + 11 * p ** 3 / 72
    if x < 0:
        return x - x ** 2 + mp.mpf(1.5) * x ** 3 - mp.mpf(8) / 3 * x ** 4
    return mp.log1p(x)


def lambert_w0(x, ctx: PrecisionContext):
    """Principal branch W0(x), the solution of W e^W = x with W >= -1.

    Halley's iteration started from log x - log log x for large x, the
    branch-point series near -1/e, or the Taylor series near 0.

    Args:
        x: Real argument, x >= -1/e (any size; 10^200 is fine)
        ctx: Precision context

    Returns:
        W0(x) as an mpf

    Raises:
        DomainError: If x < -1/e
        PrecisionError: If Halley's iteration fails to settle
    """
    mp = ctx.mp
    x = mp.mpf(x)
    branch_point = -1 / mp.e
    if x < branch_point:
        if branch_point - x > ctx.tolerance:
            raise DomainError(f"W0 is defined for x >= -1/e, got {mp.nstr(x, 15)}")
        x = branch_point
    if x == 0:
        return mp.mpf(0)
    if x == branch_point:
        return mp.mpf(-1)

    tol = mp.mpf(10) ** (-(ctx.dps - 2))
    w = _lambert_initial_guess(x, mp)
    for iteration in range(HALLEY_MAX_ITERATIONS):
        ew = mp.exp(w)
        f = w * ew - x
        w1 = w + 1
        if w1 == 0:
            return w
        step = f / (ew * w1 - (w + 2) * f / (2 * w1))
        w -= step
        if abs(step) <= tol * (1 + abs(w)):
            logger.debug(f"lambert_w0 converged after {iteration + 1} Halley steps")
            return w
    raise PrecisionError(f"Halley iteration for W0({mp.nstr(x, 10)}) did not converge")


# ---------------------------------------------------------------------------
# Exponential integral
# ---------------------------------------------------------------------------

def _ei_series(z, ctx: PrecisionContext, real_input: bool):
    radius = float(abs(z))
    local = ctx.extended(int(2 * radius / LN10) + 10).mp
    zz = local.mpf(z) if real_input else local.mpc(z)
    tol = local.mpf(10) ** (-local.dps)
    total = local.mpf(0)
    term = local.mpf(1)
    k = 0
    while True:
        k += 1
        term *= zz / k
        contribution = term / k
        total += contribution
        if k > radius and abs(contribution) <= tol * max(1, abs(total)):
            break
    log_part = local.log(abs(zz)) if real_input else local.log(zz)
    result = local.euler + log_part + total
    mp = ctx.mp
    return mp.mpf(result) if real_input else mp.mpc(result)


def _ei_asymptotic(z, ctx: PrecisionContext, real_input: bool):
    mp = ctx.mp
    tol = mp.mpf(10) ** (-ctx.dps)
    total = mp.mpf(1)
    term = mp.mpf(1)
    previous = mp.inf
    k = 0
    while True:
        k += 1
        term *= k / z
        magnitude = abs(term)
        if magnitude > previous:
            break
        total += term
        if magnitude <= tol:
            break
        previous = magnitude
    result = mp.exp(z) / z * total
    if real_input:
        return mp.re(result)
    if z.imag > 0:
        result += mp.mpc(0, mp.pi)
    elif z.imag < 0:
        result -= mp.mpc(0, mp.pi)
    return result


def exp_integral_ei(z, ctx: PrecisionContext):
    """Exponential integral Ei(z) = gamma + log z + sum z^k / (k k!).

    The power series runs with extra guard digits for |z| up to the
    crossover max(40, dps ln 10 + 10); beyond it the asymptotic expansion
    e^z/z sum k!/z^k (+ i pi sign(Im z)) is used. Real arguments take the
    principal-value convention, so Ei(log x) = Li(x) for x > 1.

    Args:
        z: Real or complex argument, z != 0
        ctx: Precision context

    Returns:
        mpf for real input, mpc for complex input

    Raises:
        PoleError: If z == 0
    """
    mp = ctx.mp
    real_input = not _is_complex(z)
    value = mp.mpf(z) if real_input else mp.mpc(z)
    if value == 0:
        raise PoleError("Ei has a logarithmic singularity at z = 0")
    crossover = max(40.0, ctx.dps * LN10 + 10)
    if float(abs(value)) <= crossover:
        return _ei_series(value, ctx, real_input)
    return _ei_asymptotic(value, ctx, real_input)


def log_integral(x, ctx: PrecisionContext):
    """Li(x) = Ei(log x) for real x > 0, principal value across x = 1."""
    mp = ctx.mp
    x = mp.mpf(x)
    if x <= 0:
        raise DomainError(f"Li is evaluated for x > 0, got {mp.nstr(x, 10)}")
    if x == 1:
        raise PoleError("Li has a logarithmic singularity at x = 1")
    return exp_integral_ei(mp.log(x), ctx)


# ---------------------------------------------------------------------------
# Sieve tables
# ---------------------------------------------------------------------------

def _check_sieve_limit(limit: int, cap: int) -> int:
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > cap:
        raise ResourceLimitError(f"sieve limit {limit} exceeds the cap of {cap} entries")
    return limit


def sieve_primes(limit: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """Boolean array is_prime[0..limit] by the sieve of Eratosthenes."""
    limit = _check_sieve_limit(limit, cap)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return is_prime


def prime_counts(limit: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """Prefix counts pi(0..limit)."""
    return np.cumsum(sieve_primes(limit, cap), dtype=np.int64)


class ArithmeticFunctionTable:
    """Immutable sieve tables of mu(n), Lambda(n) and their prefix sums.

    Attributes:
        limit: Largest n covered
    """

    def __init__(self, limit: int, mobius: np.ndarray, prime_power_base: np.ndarray):
        self.limit = int(limit)
        self._mobius = mobius
        self._base = prime_power_base
        von_mangoldt = np.zeros(self.limit + 1, dtype=np.float64)
        powers = prime_power_base > 0
        von_mangoldt[powers] = np.log(prime_power_base[powers])
        self._von_mangoldt = von_mangoldt
        is_prime = prime_power_base == np.arange(self.limit + 1)
        is_prime[:2] = False
        self._prime_counts = np.cumsum(is_prime, dtype=np.int64)
        self._psi = np.cumsum(von_mangoldt)
        for array in (self._mobius, self._base, self._von_mangoldt, self._prime_counts, self._psi):
            array.setflags(write=False)

    def _index(self, n) -> int:
        n = int(n)
        if n < 0:
            raise DomainError(f"arithmetic tables are indexed by n >= 0, got {n}")
        if n > self.limit:
            raise TableTooSmallError(f"n = {n} exceeds the table limit {self.limit}")
        return n

    @property
    def mobius_values(self) -> np.ndarray:
        """Read-only mu(0..limit); mu(0) is stored as 0."""
        return self._mobius

    @property
    def von_mangoldt_values(self) -> np.ndarray:
        """Read-only Lambda(0..limit) as doubles."""
        return self._von_mangoldt

    def mobius(self, n: int) -> int:
        return int(self._mobius[self._index(n)])

    def von_mangoldt(self, n: int) -> float:
        return float(self._von_mangoldt[self._index(n)])

    def prime_power_base(self, n: int) -> int:
        """p when n = p^m, else 0."""
        return int(self._base[self._index(n)])

    def prime_count(self, n: int) -> int:
        """pi(n) for integer n."""
        return int(self._prime_counts[self._index(n)])

    def chebyshev_psi(self, n: int) -> float:
        """psi(n) = sum of Lambda(k) for k <= n."""
        return float(self._psi[self._index(n)])

    def __repr__(self) -> str:
        return f"ArithmeticFunctionTable(limit={self.limit})"


def build_arithmetic_tables(limit: int, cap: int = SIEVE_CAP) -> ArithmeticFunctionTable:
    """Sieve mu and Lambda up to ``limit``.

    Args:
        limit: Largest n to tabulate (>= 2)
        cap: Largest limit accepted

    Returns:
        ArithmeticFunctionTable covering 0..limit

    Raises:
        DomainError: If limit < 2
        ResourceLimitError: If limit exceeds cap
    """
    is_prime = sieve_primes(limit, cap)
    limit = len(is_prime) - 1
    primes = np.flatnonzero(is_prime)

    mobius = np.ones(limit + 1, dtype=np.int8)
    base = np.zeros(limit + 1, dtype=np.int64)
    for p in primes:
        p = int(p)
        mobius[p::p] *= -1
        square = p * p
        if square <= limit:
            mobius[square::square] = 0
        power = p
        while power <= limit:
            base[power] = p
            power *= p
    mobius[0] = 0

    logger.info(f"Sieved mu and Lambda up to {limit} ({len(primes)} primes)")
    return ArithmeticFunctionTable(limit, mobius, base)
