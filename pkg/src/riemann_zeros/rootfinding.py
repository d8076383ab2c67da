"""Brent's method and sign-change bracketing on mpmath arithmetic.

The iteration follows scipy's brentq.c: keep the root bracketed between
xcur and xblk, try inverse quadratic (or secant) steps, and fall back to
bisection whenever the step would not shrink the bracket fast enough.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .errors import BracketError, ConvergenceError


logger = logging.getLogger(__name__)


@dataclass
class BrentResult:
    """Outcome of a Brent solve."""
    root: object
    froot: object
    iterations: int
    calls: int
    bracket: Tuple[object, object]


def _opposite(fa, fb) -> bool:
    return (fa < 0 < fb) or (fb < 0 < fa)


def brentq(f: Callable, xa, xb, xtol, rtol=0, max_iterations: int = 400,
           fa=None, fb=None) -> BrentResult:
    """Find a root of f in [xa, xb] where f changes sign.

    Args:
        f: Scalar function
        xa: One end of the bracket
        xb: Other end of the bracket
        xtol: Absolute abscissa tolerance
        rtol: Relative abscissa tolerance
        max_iterations: Iteration cap
        fa: f(xa) if already known
        fb: f(xb) if already known

    Returns:
        BrentResult with the root, its function value and the final bracket

    Raises:
        BracketError: If f(xa) and f(xb) have the same sign
        ConvergenceError: If the iteration cap is reached
    """
    xpre, xcur = xa, xb
    fpre = f(xpre) if fa is None else fa
    fcur = f(xcur) if fb is None else fb
    calls = (fa is None) + (fb is None)

    if fpre == 0:
        return BrentResult(xpre, fpre, 0, calls, (xpre, xpre))
    if fcur == 0:
        return BrentResult(xcur, fcur, 0, calls, (xcur, xcur))
    if not _opposite(fpre, fcur):
        raise BracketError(f"no sign change on [{xa}, {xb}]", bracket=(xa, xb))

    xblk, fblk = xpre, fpre
    spre = scur = xcur - xpre
    for iteration in range(1, max_iterations + 1):
        if _opposite(fpre, fcur):
            xblk, fblk = xpre, fpre
            spre = scur = xcur - xpre
        if abs(fblk) < abs(fcur):
            xpre, xcur, xblk = xcur, xblk, xcur
            fpre, fcur, fblk = fcur, fblk, fcur

        delta = (xtol + rtol * abs(xcur)) / 2
        sbis = (xblk - xcur) / 2
        if fcur == 0 or abs(sbis) < delta:
            lo, hi = (xcur, xblk) if xcur <= xblk else (xblk, xcur)
            return BrentResult(xcur, fcur, iteration, calls, (lo, hi))

        if abs(spre) > delta and abs(fcur) < abs(fpre):
            if xpre == xblk:
                # secant
                stry = -fcur * (xcur - xpre) / (fcur - fpre)
            else:
                # inverse quadratic
                dpre = (fpre - fcur) / (xpre - xcur)
                dblk = (fblk - fcur) / (xblk - xcur)
                stry = -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            if 2 * abs(stry) < min(abs(spre), 3 * abs(sbis) - delta):
                spre, scur = scur, stry
            else:
                spre = scur = sbis
        else:
            spre = scur = sbis

        xpre, fpre = xcur, fcur
        if abs(scur) > delta:
            xcur += scur
        else:
            xcur += delta if sbis > 0 else -delta
        fcur = f(xcur)
        calls += 1

    raise ConvergenceError(f"Brent did not converge in {max_iterations} iterations near {xcur}")


def expand_bracket(f: Callable, center, halfwidth, growth: float, max_expansions: int,
                   walls: Optional[Tuple[object, object]] = None):
    """Walk outward from ``center`` until f goes from negative to positive.

    f is expected to increase through the root. When f(a) > 0 the root lies
    further left, so the bracket slides left (and likewise to the right),
    with the step growing geometrically.

    Args:
        f: Function increasing through its root
        center: Initial estimate
        halfwidth: Initial half-width
        growth: Step growth factor per expansion
        max_expansions: Number of slides allowed
        walls: Optional hard (lo, hi) limits the bracket may not cross

    Returns:
        (a, b, fa, fb) with fa < 0 < fb

    Raises:
        BracketError: If no sign change is found
    """
    lo_wall, hi_wall = walls if walls is not None else (None, None)
    a, b = center - halfwidth, center + halfwidth
    if lo_wall is not None and a <= lo_wall:
        a = (lo_wall + center) / 2
    if hi_wall is not None and b >= hi_wall:
        b = (hi_wall + center) / 2
    fa, fb = f(a), f(b)
    step = halfwidth

    for expansion in range(max_expansions + 1):
        if fa < 0 < fb or fa == 0 or fb == 0:
            return a, b, fa, fb
        if expansion == max_expansions:
            break
        step *= growth
        if fa > 0:
            b, fb = a, fa
            a = a - step
            if lo_wall is not None and a <= lo_wall:
                a = (lo_wall + b) / 2
            fa = f(a)
        if fb < 0:
            a, fa = b, fb
            b = b + step
            if hi_wall is not None and b >= hi_wall:
                b = (hi_wall + a) / 2
            fb = f(b)
        logger.debug(f"Bracket expansion {expansion + 1}: [{a}, {b}]")

    raise BracketError(
        f"no sign change found around {center} after {max_expansions} expansions",
        bracket=(a, b),
    )
