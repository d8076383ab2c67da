"""Solve for the ordinate of the n-th nontrivial zero on the critical line.

Two equations are solved, both evaluated a small distance delta to the
right of the line so arg zeta is well defined. arg zeta is taken on its
continuous branch, which makes either left side a smoothed staircase
in N(y) with one sign change per zero:

    asymptotic:  (y/2pi) log(y/2pi e) + arg zeta(1/2+delta+iy)/pi = n - 11/8
    exact:       theta(y) + arg zeta(1/2+delta+iy) = (n - 3/2) pi

The Lambert W solution of the first equation without the arg term seeds
both solvers.
"""

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    MisindexError,
    NearZeroWarning,
    PrecisionError,
    ResourceLimitError,
    RiemannZerosError,
)
from .models import SolverConfig, ZeroMethod, ZeroRecord
from .precision import PrecisionContext
from .rootfinding import brentq, expand_bracket
from .special_functions import lambert_w0, riemann_siegel_theta
from .utils import agreed_digits, integer_digits
from .zeta_engine import arg_turns, arg_zeta_continuous, arg_zeta_shifted, delta_floor, zeta


logger = logging.getLogger(__name__)

ASYMPTOTIC_REJECT = 0.25
INDEX_OFFSET = 100
VANISH_MARGIN = 3


class CountingVariant(str, Enum):
    """Formulas for the number of zeros with 0 < Im rho <= T."""
    RIEMANN_ASYMPTOTIC = "riemann_asymptotic"
    BACKLUND_EXACT = "backlund_exact"
    CRITICAL_LINE_ASYMPTOTIC = "critical_line_asymptotic"
    CRITICAL_LINE_EXACT = "critical_line_exact"


def _check_index(n) -> int:
    if int(n) != n or int(n) < 1:
        raise DomainError(f"zero index must be a positive integer, got {n}")
    return int(n)


def _seed_offset(n: int, ctx: PrecisionContext):
    return ctx.mpf(n) - ctx.mpf(11) / 8


def lambert_seed(n: int, ctx: PrecisionContext):
    """Closed-form estimate 2 pi (n - 11/8) / W0((n - 11/8)/e).

    Works for arbitrarily large n; ctx must carry enough digits to hold
    the integer part of the result.
    """
    n = _check_index(n)
    mp = ctx.mp
    offset = _seed_offset(n, ctx)
    return 2 * mp.pi * offset / lambert_w0(offset / mp.e, ctx)


def local_spacing(y, ctx: PrecisionContext):
    """Mean distance 2 pi / log(y / 2 pi) between zeros near height y."""
    mp = ctx.mp
    y = mp.mpf(y)
    ratio = y / (2 * mp.pi)
    if ratio <= mp.e:
        # the density formula degenerates below 2 pi e
        ratio = mp.e
    return 2 * mp.pi / mp.log(ratio)


def _arg(y, delta, ctx: PrecisionContext, principal: bool):
    if principal:
        return arg_zeta_shifted(y, delta, ctx)
    return arg_zeta_continuous(y, delta, ctx)


def asymptotic_lhs(y, n: int, delta, ctx: PrecisionContext, with_arg: bool = True,
                   principal: bool = False):
    """(y/2pi) log(y/2pi e) + arg zeta(1/2+delta+iy)/pi - (n - 11/8).

    With the continuous branch of arg zeta the left side is about
    N(y) - n + 1/2, a staircase whose only sign change is at the n-th zero.

    Args:
        y: Ordinate, y > 0
        n: Zero index
        delta: Shift off the critical line
        ctx: Precision context
        with_arg: Drop the arg zeta term when False (its root is the Lambert seed)
        principal: Use the principal value of arg zeta instead of the
            continuous branch
    """
    mp = ctx.mp
    y = mp.mpf(y)
    if y <= 0:
        raise DomainError(f"y must be positive, got {mp.nstr(y, 10)}")
    two_pi = 2 * mp.pi
    value = y / two_pi * mp.log(y / (two_pi * mp.e)) - _seed_offset(_check_index(n), ctx)
    if with_arg:
        value += _arg(y, delta, ctx, principal) / mp.pi
    return value


def exact_lhs(y, n: int, delta, ctx: PrecisionContext, principal: bool = False):
    """theta(y) + arg zeta(1/2+delta+iy) - (n - 3/2) pi, about pi (N(y) - n + 1/2)."""
    mp = ctx.mp
    y = mp.mpf(y)
    if y <= 0:
        raise DomainError(f"y must be positive, got {mp.nstr(y, 10)}")
    n = _check_index(n)
    offset = (mp.mpf(n) - mp.mpf(3) / 2) * mp.pi
    return riemann_siegel_theta(y, ctx) + _arg(y, delta, ctx, principal) - offset


def _count_terms(T, ctx: PrecisionContext, delta=None):
    """(theta(T)/pi, S(T), |zeta|) at height T, S on the continuous branch."""
    mp = ctx.mp
    if delta is None:
        delta = delta_floor(ctx)
    value = zeta(mp.mpc(mp.mpf(0.5) + delta, T), ctx)
    if value == 0:
        raise PrecisionError(f"zeta vanished at T = {mp.nstr(T, 15)}")
    principal = mp.arg(value)
    s = (principal + 2 * arg_turns(T, delta, principal) * mp.pi) / mp.pi
    return riemann_siegel_theta(T, ctx) / mp.pi, s, abs(value)


def _exact_count(T, ctx: PrecisionContext):
    theta_part, s, _ = _count_terms(T, ctx)
    return theta_part + 1 + s


def count_zeros_smooth(T, variant: CountingVariant, ctx: PrecisionContext):
    """Number of zeros up to height T by one of four formulas.

    riemann_asymptotic:        (T/2pi) log(T/2pi e) + 7/8
    critical_line_asymptotic:  the same plus S(T)
    backlund_exact:            theta(T)/pi + 1 + S(T)
    critical_line_exact:       theta(T)/pi + 1 + S(T)

    S(T) = arg zeta(1/2 + delta + iT)/pi at delta = 10^(-digits/2).

    Raises:
        DomainError: If T <= 2 pi
    """
    mp = ctx.mp
    T = mp.mpf(T)
    variant = CountingVariant(variant)
    if T <= 2 * mp.pi:
        raise DomainError(f"counting needs T > 2 pi, got {mp.nstr(T, 10)}")
    two_pi = 2 * mp.pi
    smooth = T / two_pi * mp.log(T / (two_pi * mp.e)) + mp.mpf(7) / 8
    if variant == CountingVariant.RIEMANN_ASYMPTOTIC:
        return smooth

    theta_part, s, magnitude = _count_terms(T, ctx)
    if magnitude < 1e-6:
        warnings.warn(
            f"T = {mp.nstr(T, 15)} lies within |zeta| = {mp.nstr(magnitude, 3)} of a zero; "
            f"the count may be off by one",
            NearZeroWarning,
            stacklevel=2,
        )
    if variant == CountingVariant.CRITICAL_LINE_ASYMPTOTIC:
        return smooth + s
    return theta_part + 1 + s


def gram_point(n: int, ctx: PrecisionContext):
    """Gram point g_n, the solution of theta(g_n) = n pi with g_n >= 10.

    Raises:
        DomainError: If n < 0
    """
    if int(n) != n or int(n) < 0:
        raise DomainError(f"Gram index must be a non-negative integer, got {n}")
    n = int(n)
    mp = ctx.mp
    offset = mp.mpf(n) + mp.mpf(1) / 8
    guess = 2 * mp.pi * offset / lambert_w0(offset / mp.e, ctx)
    target = n * mp.pi

    def f(t):
        return riemann_siegel_theta(t, ctx) - target

    lo_wall = mp.mpf(10)
    a, b, fa, fb = expand_bracket(f, guess, mp.mpf(1), 1.5, 40, walls=(lo_wall, None))
    if fa == 0:
        return a
    if fb == 0:
        return b
    xtol = guess * mp.mpf(10) ** (-ctx.digits - 2)
    return brentq(f, a, b, xtol, max_iterations=400, fa=fa, fb=fb).root


def _solver_context(delta: float, ctx: PrecisionContext) -> PrecisionContext:
    """ctx, widened if delta sits below its 10^(-digits/2) floor."""
    decade = math.ceil(-math.log10(delta))
    return ctx.at_least(2 * decade + 2)


def _verify_index(y, n: int, step, ctx: PrecisionContext) -> None:
    """Check that the zero count just above y equals n."""
    mp = ctx.mp
    counted = int(mp.nint(_exact_count(y + step, ctx)))
    if counted != n:
        raise MisindexError(f"ordinate {mp.nstr(y, 15)} counts as zero {counted}, expected {n}")


def _check_vanishes(y, n: int, decimals: int, ctx: PrecisionContext) -> None:
    """Refuse to certify y unless |zeta(1/2 + iy)| <= 10^(VANISH_MARGIN - decimals)."""
    mp = ctx.mp
    magnitude = abs(zeta(mp.mpc(mp.mpf(0.5), y), ctx))
    bound = mp.mpf(10) ** (VANISH_MARGIN - decimals)
    if magnitude > bound:
        raise ConvergenceError(
            f"zero {n}: |zeta| = {mp.nstr(magnitude, 3)} at {mp.nstr(y, 15)} exceeds "
            f"{mp.nstr(bound, 3)} for {decimals} certified decimals"
        )


def _bracket_around(f, center, halfwidth, cfg: SolverConfig, walls):
    return expand_bracket(
        f, center, halfwidth, cfg.bracket_growth, cfg.max_bracket_expansions, walls=walls
    )


def _walls_in(ctx: PrecisionContext, walls) -> Optional[Tuple[object, object]]:
    if walls is None:
        return None
    lo, hi = walls
    return (ctx.mpf(lo) if lo is not None else None, ctx.mpf(hi) if hi is not None else None)


def solve_zero_asymptotic(n: int, cfg: SolverConfig, ctx: PrecisionContext,
                          walls: Optional[Tuple[object, object]] = None) -> ZeroRecord:
    """Solve the asymptotic equation for the n-th zero with Brent's method.

    The bracket starts at 0.45 local spacings around the Lambert seed and
    slides outward geometrically. If no sign change appears, delta is cut
    by cfg.delta_step (sharpening the jump of arg zeta at a close pair)
    before giving up.

    Args:
        n: Zero index
        cfg: Solver settings; the final schedule entry is the delta used
        ctx: Precision context
        walls: Optional (lo, hi) ordinates the bracket may not cross,
            typically the neighbouring zeros

    Returns:
        ZeroRecord with method asymptotic_eq

    Raises:
        BracketError: If no sign change is found after all retries
        ConvergenceError: If Brent lands on a discontinuity of arg zeta or
            zeta(1/2 + iy) is too large for the certified digits
        MisindexError: If the root is not the n-th zero
    """
    n = _check_index(n)
    if n > cfg.max_index:
        raise ResourceLimitError(f"n = {n} exceeds the solver cap {cfg.max_index}")

    delta = cfg.final_delta
    last_error = None
    for attempt in range(cfg.close_pair_retries + 1):
        work = _solver_context(delta, ctx)
        mp = work.mp
        seed = lambert_seed(n, work)
        halfwidth = cfg.bracket_halfwidth_factor * local_spacing(seed, work)
        d = mp.mpf(delta)

        def f(y):
            return asymptotic_lhs(y, n, d, work)

        try:
            a, b, fa, fb = _bracket_around(f, seed, halfwidth, cfg, _walls_in(work, walls))
        except BracketError as exc:
            last_error = exc
            logger.warning(f"No bracket for zero {n} at delta={delta:.1e}; shrinking delta")
            delta *= cfg.delta_step
            continue

        result = brentq(f, a, b, mp.mpf(cfg.brent_tol), max_iterations=cfg.max_iterations,
                        fa=fa, fb=fb)
        residual = abs(result.froot)
        if residual > ASYMPTOTIC_REJECT:
            raise ConvergenceError(
                f"zero {n}: Brent converged to a jump of arg zeta near "
                f"{mp.nstr(result.root, 15)} (|f| = {mp.nstr(residual, 3)})"
            )
        _verify_index(result.root, n, INDEX_OFFSET * d, work)

        decimals = int(math.floor(-math.log10(max(cfg.brent_tol, 10 * delta))))
        _check_vanishes(result.root, n, decimals, work)
        certified = min(integer_digits(result.root) + decimals, work.digits)
        logger.info(
            f"Zero {n}: y={mp.nstr(result.root, 15)} after {result.iterations} Brent steps"
        )
        return ZeroRecord(
            n=n,
            y=work.to_string(result.root),
            digits_certified=certified,
            method=ZeroMethod.ASYMPTOTIC,
            residual=float(residual),
            delta=delta,
        )

    raise BracketError(f"zero {n}: {last_error}", n=n, bracket=getattr(last_error, "bracket", None))


def solve_zero_exact(n: int, cfg: SolverConfig, ctx: PrecisionContext,
                     walls: Optional[Tuple[object, object]] = None) -> ZeroRecord:
    """Solve the exact equation by iterating over a shrinking delta schedule.

    Each stage solves theta(y) + arg zeta(1/2+delta+iy) = (n - 3/2) pi,
    starting from the Lambert seed and then centring on the previous root.
    The root at shift delta sits O(delta^2) from the zero, so successive
    roots agree to more and more digits; the loop stops once two agree to
    cfg.target_digits significant digits. Each stage runs at
    target + log10(1/delta) + integer digits of y working digits so the
    final residual is below 10^-(target+3).

    Args:
        n: Zero index
        cfg: Solver settings (schedule, extension step, target digits)
        ctx: Precision context; its guard digits are reused
        walls: Optional (lo, hi) ordinates the first bracket may not cross

    Returns:
        ZeroRecord with method exact_eq and digits_certified = agreed digits

    Raises:
        ConvergenceError: If the schedule runs out before agreement or
            zeta(1/2 + iy) is too large for the certified digits
        BracketError: If the first bracket cannot be found
        MisindexError: If the first root is not the n-th zero
    """
    n = _check_index(n)
    if n > cfg.max_index:
        raise ResourceLimitError(f"n = {n} exceeds the solver cap {cfg.max_index}")

    target = cfg.target_digits
    seed_ctx = ctx.at_least(target)
    seed = lambert_seed(n, seed_ctx)
    y_digits = integer_digits(seed)

    previous = None
    previous_delta = None
    for stage, delta in enumerate(cfg.extended_schedule()):
        decade = math.ceil(-math.log10(delta))
        work = PrecisionContext(max(target + decade + y_digits + 8, 2 * decade + 2), ctx.guard)
        mp = work.mp
        d = mp.mpf(delta)

        def g(y):
            return exact_lhs(y, n, d, work)

        if previous is None:
            center = work.mpf(seed)
            halfwidth = cfg.bracket_halfwidth_factor * local_spacing(center, work)
            bracket_walls = _walls_in(work, walls)
        else:
            center = work.mpf(previous)
            halfwidth = 10 * mp.mpf(previous_delta)
            bracket_walls = None
        a, b, ga, gb = _bracket_around(g, center, halfwidth, cfg, bracket_walls)

        xtol = d * mp.mpf(10) ** (-(target + 3))
        result = brentq(g, a, b, xtol, max_iterations=cfg.max_iterations, fa=ga, fb=gb)
        residual = abs(result.froot)
        if residual > mp.pi / 2:
            raise ConvergenceError(
                f"zero {n}: stage {stage} converged to a jump of arg zeta near "
                f"{mp.nstr(result.root, 15)}"
            )
        if previous is None:
            _verify_index(result.root, n, INDEX_OFFSET * d, work)

        logger.debug(
            f"Zero {n} stage {stage}: delta={delta:.1e}, {work.digits} digits, "
            f"{result.iterations} Brent steps"
        )
        if previous is not None:
            agreed = agreed_digits(result.root, previous, work)
            if agreed >= target:
                _check_vanishes(result.root, n, target - integer_digits(result.root), work)
                logger.info(f"Zero {n}: {agreed} digits agree at delta={delta:.1e}")
                return ZeroRecord(
                    n=n,
                    y=work.to_string(result.root, target),
                    digits_certified=target,
                    method=ZeroMethod.EXACT,
                    residual=float(residual),
                    delta=delta,
                )
        previous = result.root
        previous_delta = delta

    raise ConvergenceError(
        f"zero {n}: delta schedule exhausted before {target} digits agreed"
    )


def seed_record(n: int, ctx: PrecisionContext) -> ZeroRecord:
    """ZeroRecord holding the Lambert seed itself (nothing certified)."""
    seed = lambert_seed(n, ctx)
    digits = max(ctx.digits, integer_digits(seed) + 2)
    return ZeroRecord(
        n=int(n),
        y=ctx.to_string(seed, digits),
        digits_certified=0,
        method=ZeroMethod.LAMBERT_SEED,
        residual=0.0,
    )


def solve_zero(n: int, method: ZeroMethod, cfg: SolverConfig, ctx: PrecisionContext,
               walls: Optional[Tuple[object, object]] = None) -> ZeroRecord:
    """Dispatch to the seed, asymptotic or exact solver."""
    method = ZeroMethod(method)
    if method == ZeroMethod.LAMBERT_SEED:
        return seed_record(n, ctx)
    if method == ZeroMethod.ASYMPTOTIC:
        return solve_zero_asymptotic(n, cfg, ctx, walls=walls)
    if method == ZeroMethod.EXACT:
        return solve_zero_exact(n, cfg, ctx, walls=walls)
    raise DomainError(f"method {method.value} does not solve for zeros")


def _solve_worker(n: int, method: str, cfg_data: dict, digits: int, guard: int):
    """Process-pool entry point; rebuilds its own precision context."""
    ctx = PrecisionContext(digits, guard)
    cfg = SolverConfig(**cfg_data)
    try:
        return n, solve_zero(n, ZeroMethod(method), cfg, ctx), None
    except RiemannZerosError as exc:
        return n, None, f"{type(exc).__name__}: {exc}"


def solve_range(indices: Iterable[int], method: ZeroMethod, cfg: SolverConfig,
                ctx: PrecisionContext, jobs: int = 1,
                known: Optional[Dict[int, ZeroRecord]] = None
                ) -> Tuple[List[ZeroRecord], Dict[int, str]]:
    """Solve many zeros, optionally in parallel.

    Failed indices get one sequential retry with the already solved
    neighbours as bracket walls and a smaller delta.

    Args:
        indices: Zero indices to solve
        method: Solver to use
        cfg: Solver settings
        ctx: Precision context (workers rebuild it from digits and guard)
        jobs: Worker processes; 1 solves in this process
        known: Already solved zeros usable as walls

    Returns:
        (records sorted by n, {n: failure message})
    """
    method = ZeroMethod(method)
    indices = sorted(set(int(n) for n in indices))
    solved: Dict[int, ZeroRecord] = {}
    failures: Dict[int, str] = {}

    if jobs > 1 and len(indices) > 1:
        cfg_data = cfg.model_dump()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_solve_worker, n, method.value, cfg_data, ctx.digits, ctx.guard)
                for n in indices
            ]
            for future in as_completed(futures):
                n, record, error = future.result()
                if record is not None:
                    solved[n] = record
                else:
                    failures[n] = error
    else:
        for n in indices:
            try:
                solved[n] = solve_zero(n, method, cfg, ctx)
            except RiemannZerosError as exc:
                failures[n] = f"{type(exc).__name__}: {exc}"

    if failures and method != ZeroMethod.LAMBERT_SEED:
        neighbours = dict(known or {})
        neighbours.update(solved)
        retry_cfg = cfg.model_copy(update={
            "delta_schedule": [d * cfg.delta_step for d in cfg.delta_schedule],
        })
        for n in sorted(failures):
            lo = neighbours.get(n - 1)
            hi = neighbours.get(n + 1)
            walls = (lo.y if lo else None, hi.y if hi else None)
            logger.warning(f"Retrying zero {n} with walls {walls}")
            try:
                solved[n] = solve_zero(n, method, retry_cfg, ctx, walls=walls)
                del failures[n]
            except RiemannZerosError as exc:
                failures[n] = f"{type(exc).__name__}: {exc}"

    for n, message in sorted(failures.items()):
        logger.error(f"Zero {n} failed: {message}")
    return [solved[n] for n in sorted(solved)], failures


def seed_vs_solved(records: Iterable[ZeroRecord], ctx: PrecisionContext) -> List[Tuple[int, float, float]]:
    """Rows (n, Lambert seed, solved ordinate) for comparing the two."""
    rows = []
    for record in sorted(records, key=lambda r: r.n):
        rows.append((record.n, float(lambert_seed(record.n, ctx)), record.value))
    return rows
