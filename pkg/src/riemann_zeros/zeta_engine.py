"""Riemann zeta on the critical strip and the quantities built from it:
arg zeta just right of the critical line, chi(z), and the polar form
chi = A e^{i theta} in its exact and large-y versions.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Tuple

import numpy as np

from .errors import DomainError, PoleError, PrecisionError, ResourceLimitError
from .precision import PrecisionContext
from .special_functions import _is_complex, bernoulli_ratio, log_gamma


logger = logging.getLogger(__name__)

# Euler-Maclaurin: tail terms decay roughly like EM_QUALITY^(-2j)
EM_QUALITY = 1.5
EM_TERM_CAP = 10 ** 7
MAX_DELTA = 1e-2

# Horizontal sweep fixing the branch of arg zeta (double precision)
SWEEP_START = 3.0
SWEEP_FLOOR = 1e-4
SWEEP_MAX_STEP = math.pi / 4
SWEEP_MAX_DEPTH = 40
SWEEP_SAMPLES = 17
_SWEEP_TAIL = 20


@dataclass(frozen=True)
class CriticalPoint:
    """A point x + delta + iy near the critical strip."""
    x: object
    y: object
    delta: object = 0

    def __post_init__(self):
        if not 0 <= float(self.x) <= 1:
            raise DomainError(f"x must lie in [0, 1], got {self.x}")
        if float(self.y) <= 0:
            raise DomainError(f"y must be positive, got {self.y}")
        if not 0 <= float(self.delta) < MAX_DELTA:
            raise DomainError(f"delta must lie in [0, {MAX_DELTA}), got {self.delta}")

    def z(self, ctx: PrecisionContext):
        return ctx.mpc(ctx.mpf(self.x) + ctx.mpf(self.delta), ctx.mpf(self.y))


@dataclass(frozen=True)
class PolarChi:
    """chi(z) written as modulus * exp(i * phase)."""
    modulus: object
    phase: object
    asymptotic: bool

    def value(self, ctx: PrecisionContext):
        mp = ctx.mp
        return self.modulus * mp.expj(self.phase)


class DiagnosticSample(NamedTuple):
    y: float
    cos_theta: float
    sin_theta: float


class TraceSample(NamedTuple):
    y: float
    smooth: float
    arg_term: float
    total: float


def _truncation(s, ctx: PrecisionContext) -> Tuple[int, int]:
    """Euler-Maclaurin head length N and tail length M for ctx.dps digits."""
    digits = ctx.dps + 2
    height = float(abs(s))
    per_term = 2 * math.log10(EM_QUALITY)
    tail = math.ceil(digits / per_term) + 2
    head = max(10, math.ceil(EM_QUALITY * (height + 2 * tail) / (2 * math.pi)))
    sigma = float(s.real)
    if sigma < 1:
        tail = math.ceil((digits + (1 - sigma) * math.log10(head)) / per_term) + 2
        head = max(10, math.ceil(EM_QUALITY * (height + 2 * tail) / (2 * math.pi)))
    return head, tail


def zeta(z, ctx: PrecisionContext, terms: int = None, max_terms: int = EM_TERM_CAP):
    """Riemann zeta by Euler-Maclaurin summation.

    zeta(s) = sum_{k<N} k^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_j B_2j/(2j)! s(s+1)...(s+2j-2) N^(-s-2j+1)

    Args:
        z: Real or complex argument, z != 1
        ctx: Precision context
        terms: Override for the head length N
        max_terms: Largest N accepted

    Returns:
        mpf for real input, mpc otherwise

    Raises:
        PoleError: At z = 1
        ResourceLimitError: If N exceeds max_terms
        PrecisionError: If the tail fails to converge for an overridden N
    """
    mp = ctx.mp
    real_input = not _is_complex(z)
    s = mp.mpc(z)
    if s == 1:
        raise PoleError("zeta has a pole at z = 1")

    if terms is None:
        head, tail = _truncation(s, ctx)
    else:
        head, tail = int(terms), 0
    if head > max_terms:
        raise ResourceLimitError(
            f"zeta at |z| = {mp.nstr(abs(s), 8)} needs {head} terms (cap {max_terms})"
        )
    j_max = max(tail, int((2 * math.pi * head - float(abs(s))) / 2), 1)

    total = mp.fsum(mp.power(k, -s) for k in range(1, head))
    head_power = mp.power(head, -s)
    total += head * head_power / (s - 1) + head_power / 2

    tol = mp.mpf(10) ** (-ctx.dps)
    factor = s * head_power / head
    head_squared = head * head
    for j in range(1, j_max + 1):
        term = bernoulli_ratio(j, ctx) * factor
        total += term
        if abs(term) <= tol:
            break
        factor *= (s + 2 * j - 1) * (s + 2 * j) / head_squared
    else:
        raise PrecisionError(f"Euler-Maclaurin tail did not converge with N = {head}")

    if real_input:
        return total.real
    return total


def chi(z, ctx: PrecisionContext):
    """chi(z) = pi^(-z/2) Gamma(z/2) zeta(z).

    Raises:
        PoleError: At z = 0, z = 1, or where Gamma(z/2) has a pole
    """
    mp = ctx.mp
    s = mp.mpc(z)
    if s == 0 or s == 1:
        raise PoleError(f"chi has a pole at z = {mp.nstr(s.real, 3)}")
    half = s / 2
    return mp.exp(-half * mp.log(mp.pi) + log_gamma(half, ctx)) * zeta(s, ctx)


def delta_floor(ctx: PrecisionContext):
    """Smallest shift 10^(-digits/2) still resolvable at this precision."""
    return ctx.mp.mpf(10) ** (-(ctx.digits // 2))


def _arg_zeta(x, y, ctx: PrecisionContext):
    mp = ctx.mp
    value = zeta(mp.mpc(x, y), ctx)
    if value == 0:
        raise PrecisionError(f"zeta vanished at {mp.nstr(x, 10)} + {mp.nstr(y, 15)}i")
    return mp.arg(value)


def arg_zeta_shifted(y, delta, ctx: PrecisionContext):
    """Principal value of arg zeta(1/2 + delta + iy), in (-pi, pi].

    Args:
        y: Ordinate, y > 0
        delta: Shift off the critical line, 0 < delta < 1e-2
        ctx: Precision context

    Raises:
        DomainError: If y or delta is out of range
        PrecisionError: If delta is below 10^(-digits/2)
    """
    mp = ctx.mp
    y = mp.mpf(y)
    delta = mp.mpf(delta)
    if y <= 0:
        raise DomainError(f"y must be positive, got {mp.nstr(y, 10)}")
    if not 0 < delta < MAX_DELTA:
        raise DomainError(f"delta must lie in (0, {MAX_DELTA}), got {mp.nstr(delta, 5)}")
    if delta < delta_floor(ctx):
        raise PrecisionError(
            f"delta = {mp.nstr(delta, 5)} is below the floor 1e-{ctx.digits // 2} "
            f"for {ctx.digits} digits"
        )
    return _arg_zeta(mp.mpf(0.5) + delta, y, ctx)


@lru_cache(maxsize=1)
def _float_bernoulli_ratios() -> np.ndarray:
    ctx = PrecisionContext(20)
    return np.array([float(bernoulli_ratio(j, ctx)) for j in range(1, _SWEEP_TAIL + 1)])


class _HorizontalZeta:
    """zeta(sigma + iy) in complex128 for a fixed ordinate y.

    Euler-Maclaurin with N ~ (y + 50)/pi and twenty correction terms,
    good to about 1e-9 absolute for sigma >= 0 and y up to 1e6.
    """

    def __init__(self, y: float):
        self.y = float(y)
        self.head = max(20, math.ceil((self.y + 2 * _SWEEP_TAIL + 10) / math.pi))
        self.log_k = np.log(np.arange(1, self.head, dtype=float))
        self.phase = np.exp(-1j * self.y * self.log_k)
        self.log_head = math.log(self.head)

    def __call__(self, sigma: float) -> complex:
        s = complex(sigma, self.y)
        total = complex(np.sum(np.exp(-sigma * self.log_k) * self.phase))
        head_power = cmath.exp(-s * self.log_head)
        total += self.head * head_power / (s - 1) + head_power / 2

        factor = s * head_power / self.head
        head_squared = float(self.head) ** 2
        for j, ratio in enumerate(_float_bernoulli_ratios(), start=1):
            total += ratio * factor
            factor *= (s + 2 * j - 1) * (s + 2 * j) / head_squared
        return total


def _sweep_step(values: _HorizontalZeta, lo: float, hi: float, at_lo: complex,
                depth: int) -> Tuple[float, complex]:
    at_hi = values(hi)
    change = cmath.phase(at_hi / at_lo)
    if abs(change) <= SWEEP_MAX_STEP:
        return change, at_hi
    if depth >= SWEEP_MAX_DEPTH:
        raise PrecisionError(
            f"arg zeta sweep at y = {values.y:.15g} could not resolve sigma near {lo:.3g}"
        )
    mid = (lo + hi) / 2
    first, at_mid = _sweep_step(values, lo, mid, at_lo, depth + 1)
    second, at_hi = _sweep_step(values, mid, hi, at_mid, depth + 1)
    return first + second, at_hi


def swept_arg(y: float, end: float) -> float:
    """arg zeta(end + iy) by continuous variation from sigma = 3 (double precision).

    Re zeta > 0 for sigma >= 2, so the principal value at sigma = 3 is the
    continuous one; the phase is then followed leftward, halving the step
    wherever it turns by more than pi/4.
    """
    values = _HorizontalZeta(y)
    sigmas = np.linspace(SWEEP_START, end, SWEEP_SAMPLES)
    previous = values(float(sigmas[0]))
    total = cmath.phase(previous)
    for lo, hi in zip(sigmas[:-1], sigmas[1:]):
        turn, previous = _sweep_step(values, float(lo), float(hi), previous, 0)
        total += turn
    return total


def arg_turns(y, delta, principal) -> int:
    """Whole turns separating the continuous arg zeta(1/2+delta+iy) from its principal value."""
    end = 0.5 + max(float(delta), SWEEP_FLOOR)
    swept = swept_arg(float(y), end)
    return int(round((swept - float(principal)) / (2 * math.pi)))


def arg_zeta_continuous(y, delta, ctx: PrecisionContext):
    """arg zeta(1/2 + delta + iy) defined by continuous variation from sigma = +inf.

    The principal value comes from the full-precision zeta; a double
    precision sweep along Im s = y only decides how many multiples of
    2 pi to add. This is the branch for which
    theta(y)/pi + 1 + arg zeta/pi counts the zeros up to y, so it has no
    jumps away from the zeros themselves.

    Raises:
        DomainError: If y or delta is out of range
        PrecisionError: If delta is below 10^(-digits/2)
    """
    principal = arg_zeta_shifted(y, delta, ctx)
    turns = arg_turns(y, delta, principal)
    if turns:
        logger.debug(f"arg zeta at y={float(y):.6f} lies {turns} turn(s) off its principal value")
    return principal + 2 * turns * ctx.mp.pi


def _check_strip(x, y, mp):
    if not 0 < x < 1:
        raise DomainError(f"x must lie in (0, 1), got {mp.nstr(x, 10)}")
    if y <= 0:
        raise DomainError(f"y must be positive, got {mp.nstr(y, 10)}")


def theta_exact(x, y, ctx: PrecisionContext):
    """Phase of chi(x + iy): arg Gamma((x+iy)/2) - (y/2) log pi + arg zeta(x+iy).

    arg Gamma follows the continuous log-gamma branch; arg zeta is the
    principal value.
    """
    mp = ctx.mp
    x = mp.mpf(x)
    y = mp.mpf(y)
    _check_strip(x, y, mp)
    z = mp.mpc(x, y)
    return log_gamma(z / 2, ctx).imag - y / 2 * mp.log(mp.pi) + _arg_zeta(x, y, ctx)


def amplitude_exact(x, y, ctx: PrecisionContext):
    """Modulus of chi(x + iy): pi^(-x/2) |Gamma((x+iy)/2)| |zeta(x+iy)|."""
    mp = ctx.mp
    x = mp.mpf(x)
    y = mp.mpf(y)
    _check_strip(x, y, mp)
    z = mp.mpc(x, y)
    return mp.exp(-x / 2 * mp.log(mp.pi) + log_gamma(z / 2, ctx).real) * abs(zeta(z, ctx))


def polar_chi(x, y, ctx: PrecisionContext, asymptotic: bool = False) -> PolarChi:
    """chi(x + iy) in polar form, exactly or through its large-y expansion.

    The large-y form uses
        A = sqrt(2 pi) pi^(-x/2) (y/2)^((x-1)/2) e^(-pi y/4) |zeta|
        theta = (y/2) log(y/(2 pi e)) + (pi/4)(x - 1) + arg zeta
    whose phase error is about 1/(48 y).
    """
    mp = ctx.mp
    x = mp.mpf(x)
    y = mp.mpf(y)
    _check_strip(x, y, mp)
    if not asymptotic:
        return PolarChi(amplitude_exact(x, y, ctx), theta_exact(x, y, ctx), False)

    value = zeta(mp.mpc(x, y), ctx)
    modulus = (
        mp.sqrt(2 * mp.pi) * mp.pi ** (-x / 2) * (y / 2) ** ((x - 1) / 2)
        * mp.exp(-mp.pi * y / 4) * abs(value)
    )
    phase = y / 2 * mp.log(y / (2 * mp.pi * mp.e)) + mp.pi / 4 * (x - 1) + mp.arg(value)
    return PolarChi(modulus, phase, True)


def _grid(lo, hi, samples: int, mp):
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples}")
    step = (hi - lo) / (samples - 1)
    return [lo + k * step for k in range(samples)]


def cos_sin_diagnostic(y_lo, y_hi, delta, samples: int, ctx: PrecisionContext) -> List[DiagnosticSample]:
    """Sample cos and sin of theta(1/2 + delta, y) on a uniform grid.

    On the critical line theta is a multiple of pi away from zeros; at a
    zero cos(theta) passes through 0.

    Raises:
        DomainError: Unless 0 < y_lo < y_hi and samples >= 2
    """
    mp = ctx.mp
    y_lo = mp.mpf(y_lo)
    y_hi = mp.mpf(y_hi)
    if not 0 < y_lo < y_hi:
        raise DomainError(f"need 0 < y_lo < y_hi, got ({mp.nstr(y_lo, 8)}, {mp.nstr(y_hi, 8)})")

    rows = []
    for y in _grid(y_lo, y_hi, samples, mp):
        point = CriticalPoint(mp.mpf(0.5), y, mp.mpf(delta))
        z = point.z(ctx)
        theta = theta_exact(z.real, z.imag, ctx)
        rows.append(DiagnosticSample(float(y), float(mp.cos(theta)), float(mp.sin(theta))))
    logger.debug(f"Sampled cos/sin theta at {len(rows)} ordinates")
    return rows


def symmetric_limit_arg(y, eps, ctx: PrecisionContext, delta=None) -> Tuple[object, object]:
    """Compare two definitions of arg zeta at an ordinate on the critical line.

    Returns:
        (delta_limit, symmetric_limit): arg zeta(1/2 + delta + iy) for a tiny
        delta, and the average of arg zeta(1/2 + i(y +- eps)). Across a zero
        the argument jumps by +pi, which fixes the branch of the average.
    """
    mp = ctx.mp
    y = mp.mpf(y)
    eps = mp.mpf(eps)
    if delta is None:
        delta = delta_floor(ctx)
    delta_limit = arg_zeta_shifted(y, delta, ctx)

    half = mp.mpf(0.5)
    above = zeta(mp.mpc(half, y + eps), ctx)
    below = zeta(mp.mpc(half, y - eps), ctx)
    jump = mp.arg(above / below)
    if jump < -mp.pi / 2:
        jump += 2 * mp.pi
    symmetric = mp.arg(below) + jump / 2
    if symmetric > mp.pi:
        symmetric -= 2 * mp.pi
    elif symmetric <= -mp.pi:
        symmetric += 2 * mp.pi
    return delta_limit, symmetric


def counting_trace(n: int, y_lo, y_hi, delta, samples: int, ctx: PrecisionContext) -> List[TraceSample]:
    """Terms of the asymptotic zero equation sampled over [y_lo, y_hi].

    Each row holds the smooth part (y/2pi) log(y/2pi e) - (n - 11/8), the
    arg zeta(1/2 + delta + iy)/pi part, and their sum, whose sign change
    marks the n-th zero.
    """
    mp = ctx.mp
    if int(n) < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    y_lo = mp.mpf(y_lo)
    y_hi = mp.mpf(y_hi)
    if not 0 < y_lo < y_hi:
        raise DomainError(f"need 0 < y_lo < y_hi, got ({mp.nstr(y_lo, 8)}, {mp.nstr(y_hi, 8)})")

    offset = mp.mpf(n) - mp.mpf(11) / 8
    two_pi = 2 * mp.pi
    rows = []
    for y in _grid(y_lo, y_hi, samples, mp):
        smooth = y / two_pi * mp.log(y / (two_pi * mp.e)) - offset
        arg_term = arg_zeta_continuous(y, delta, ctx) / mp.pi
        rows.append(TraceSample(float(y), float(smooth), float(arg_term), float(smooth + arg_term)))
    return rows
