"""Exception types shared across the package."""


class OscillockError(Exception):
    """Base class for all package-specific errors."""


class DomainError(OscillockError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NumericalError(OscillockError, ArithmeticError):
    """A numerical procedure failed to converge or lost consistency."""


class UnsupportedSystemError(OscillockError, ValueError):
    """Requested operation is not available for this system kind."""


class InsufficientDataError(OscillockError, ValueError):
    """Not enough samples to form the requested statistic."""
