"""Utility functions shared by the solver, store and command line."""

import math
from decimal import Decimal
from typing import Iterable, List, Tuple


def agreed_digits(a, b, ctx) -> int:
    """Number of leading significant digits on which two values agree.

    Args:
        a: First value (mpf)
        b: Second value (mpf)
        ctx: PrecisionContext the values live in

    Returns:
        floor(-log10(|a - b| / |a|)), or ctx.dps when the values are equal
    """
    mp = ctx.mp
    a = mp.mpf(a)
    b = mp.mpf(b)
    if a == b:
        return ctx.dps
    scale = abs(a) if a != 0 else mp.mpf(1)
    return max(0, int(mp.floor(-mp.log10(abs(a - b) / scale))))


def integer_digits(value) -> int:
    """Count the digits in the integer part of a positive value (at least 1)."""
    magnitude = abs(int(value))
    return len(str(magnitude)) if magnitude else 1


def significant_digits(text: str) -> int:
    """Count significant digits of a decimal string."""
    digits = Decimal(text).normalize().as_tuple().digits
    return len(digits)


def integer_root_floor(x: float, k: int) -> int:
    """floor(x^(1/k)) for real x >= 1, corrected against float rounding."""
    if x < 1:
        return 0
    m = int(x ** (1.0 / k))
    while (m + 1) ** k <= x:
        m += 1
    while m > 0 and m ** k > x:
        m -= 1
    return m


def compress_ranges(indices: Iterable[int]) -> List[Tuple[int, int]]:
    """Collapse sorted integers into inclusive (start, end) runs.

    Args:
        indices: Integers in any order

    Returns:
        List of (start, end) tuples, e.g. [1, 2, 3, 7] -> [(1, 3), (7, 7)]
    """
    runs = []
    for n in sorted(set(indices)):
        if runs and n == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], n)
        else:
            runs.append((n, n))
    return runs


def format_ranges(indices: Iterable[int]) -> str:
    """Human-readable form of compress_ranges, e.g. '1-3, 7'."""
    parts = []
    for start, end in compress_ranges(indices):
        parts.append(str(start) if start == end else f"{start}-{end}")
    return ", ".join(parts)


def half_integer_grid(x_lo: float, x_hi: float) -> List[float]:
    """Points k + 0.5 lying inside [x_lo, x_hi]."""
    start = math.ceil(x_lo - 0.5)
    return [k + 0.5 for k in range(start, math.floor(x_hi - 0.5) + 1) if x_lo <= k + 0.5 <= x_hi]
