"""Working-precision context shared by every evaluation in the package."""

import logging
from typing import Union

from mpmath.ctx_mp import MPContext

from .errors import DomainError


logger = logging.getLogger(__name__)

MIN_DIGITS = 15
MIN_GUARD = 5

Number = Union[int, float, str]


class PrecisionContext:
    """Decimal working precision plus the tolerances derived from it.

    Each instance owns a private mpmath context, so two threads holding
    different PrecisionContext objects never disturb each other's
    precision. Values are computed with ``digits + guard`` decimal digits.

    Attributes:
        digits: Significant decimal digits requested by the caller
        guard: Extra digits carried internally
        mp: The mpmath context doing the arithmetic
    """

    def __init__(self, digits: int = 30, guard: int = 10):
        """Initialize the context.

        Args:
            digits: Significant decimal digits (>= 15)
            guard: Guard digits added to the working precision (>= 5)

        Raises:
            DomainError: If digits or guard are below their minimums
        """
        if int(digits) < MIN_DIGITS:
            raise DomainError(f"digits must be >= {MIN_DIGITS}, got {digits}")
        if int(guard) < MIN_GUARD:
            raise DomainError(f"guard must be >= {MIN_GUARD}, got {guard}")

        self.digits = int(digits)
        self.guard = int(guard)
        self.mp = MPContext()
        self.mp.dps = self.digits + self.guard

    @property
    def dps(self) -> int:
        """Working decimal precision including guard digits."""
        return self.digits + self.guard

    @property
    def eps(self):
        """Check tolerance 10^(-digits+guard)."""
        return self.mp.mpf(10) ** (-self.digits + self.guard)

    @property
    def tolerance(self):
        """Target relative accuracy 10^(-digits)."""
        return self.mp.mpf(10) ** (-self.digits)

    def extended(self, extra: int) -> "PrecisionContext":
        """Return a new context carrying ``extra`` more significant digits."""
        return PrecisionContext(self.digits + max(int(extra), 0), self.guard)

    def at_least(self, digits: int) -> "PrecisionContext":
        """Return this context, or a wider one if it has fewer than ``digits``."""
        if digits <= self.digits:
            return self
        return PrecisionContext(int(digits), self.guard)

    def mpf(self, value: Number):
        """Convert a real value into this context."""
        return self.mp.mpf(value)

    def mpc(self, real: Number, imag: Number = 0):
        """Build a complex value in this context."""
        return self.mp.mpc(real, imag)

    def convert(self, value):
        """Convert any mpmath-compatible value into this context."""
        return self.mp.convert(value)

    def to_string(self, value, digits: int = None) -> str:
        """Format a real value with ``digits`` significant digits (default: self.digits)."""
        n = digits if digits is not None else self.digits
        return self.mp.nstr(self.mp.mpf(value), n, strip_zeros=False)

    def __repr__(self) -> str:
        return f"PrecisionContext(digits={self.digits}, guard={self.guard})"
