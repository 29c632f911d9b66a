"""Exception types shared across the package."""


class QuadcorrError(Exception):
    """Base class for all package errors."""


class CapacityError(QuadcorrError):
    """A computation would exceed the configured memory/work budget."""


class NonStabilizedError(QuadcorrError):
    """A p-adic density did not stabilize within the allowed number of levels."""

    def __init__(self, message, *, p=None, levels=None):
        super().__init__(message)
        self.p = p
        self.levels = levels or []


class IdentityViolation(QuadcorrError):
    """An exact identity that should hold did not (bug or excluded input)."""


class DomainError(QuadcorrError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ExtrapolationError(QuadcorrError):
    """A limit extrapolation did not settle to the requested tolerance."""
