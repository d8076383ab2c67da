"""Exception hierarchy for the Riemann zeros toolkit."""


class RiemannZerosError(Exception):
    """Base class for every numerical or storage failure raised by the package."""
    pass


class PoleError(RiemannZerosError, ValueError):
    """Raised when a function is evaluated at one of its poles or singularities."""
    pass


class DomainError(RiemannZerosError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class PrecisionError(RiemannZerosError):
    """Raised when the working precision cannot resolve the requested quantity."""
    pass


class ResourceLimitError(RiemannZerosError):
    """Raised when a computation would exceed a configured size cap."""
    pass


class BracketError(RiemannZerosError):
    """Raised when no sign change is found around a zero estimate."""

    def __init__(self, message: str, n: int = None, bracket: tuple = None):
        super().__init__(message)
        self.n = n
        self.bracket = bracket


class ConvergenceError(RiemannZerosError):
    """Raised when the shrinking delta schedule ends without agreement."""
    pass


class MisindexError(RiemannZerosError):
    """Raised when a solved ordinate is not counted as the requested zero."""
    pass


class TableTooSmallError(RiemannZerosError):
    """Raised when an arithmetic table does not reach the requested argument."""
    pass


class MissingZerosError(RiemannZerosError):
    """Raised when a zero table has gaps in a requested index range."""

    def __init__(self, message: str, missing: list = None):
        super().__init__(message)
        self.missing = missing or []


class CacheIntegrityError(RiemannZerosError):
    """Raised when a zero cache file fails validation."""
    pass


class NearZeroWarning(UserWarning):
    """Emitted when a counting height sits too close to a zero ordinate."""
    pass
