"""Exception types shared across the package."""


class TelegameError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(TelegameError, ValueError):
    """Malformed argument: bad mode index, wrong shape, non-finite data."""


class DomainError(TelegameError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class BracketError(TelegameError, RuntimeError):
    """A root finder could not bracket a sign change."""
