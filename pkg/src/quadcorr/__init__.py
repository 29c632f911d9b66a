"""Correlations of class numbers of imaginary quadratic fields and of
representation numbers of quadratic forms, with circle-method main terms."""

from .errors import CapacityError, DomainError, IdentityViolation, NonStabilizedError, QuadcorrError
from .forms import QuadForm

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DomainError",
    "IdentityViolation",
    "NonStabilizedError",
    "QuadForm",
    "QuadcorrError",
    "__version__",
]
