"""
Exception hierarchy for gabortorus.

Every error raised by the library derives from GaborTorusError and carries
the process exit code the command-line front end reports for it.
"""

from typing import Any, Optional


class GaborTorusError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class ConfigError(GaborTorusError):
    """Raised when a run configuration or an input file cannot be used."""

    exit_code = 2


class InvalidModelError(GaborTorusError):
    """Raised when a model descriptor violates its invariants."""
    pass


class InvalidLatticeError(GaborTorusError):
    """Raised when a lattice does not fit its model."""
    pass


class InvalidPhaseError(GaborTorusError):
    """Raised when a value that must have unit modulus does not."""
    pass


class ModelMismatchError(GaborTorusError):
    """Raised when operands live in different phase-space models."""
    pass


class LatticeMismatchError(GaborTorusError):
    """Raised when sequences or actions refer to incompatible lattices."""
    pass


class CocycleMismatchError(GaborTorusError):
    """Raised when two sequences carry different twists."""
    pass


class InvalidExponentError(GaborTorusError):
    """Raised for mixed-norm exponents below 1."""
    pass


class DegenerateWindowError(GaborTorusError):
    """Raised when a window or atom is identically zero."""
    pass


class NonDecayingError(GaborTorusError):
    """Raised when a Gaussian parameter has no positive definite real part, or theta coefficients outgrow c_0."""
    pass


class NotAFrameError(GaborTorusError):
    """Raised when a Gabor system has a vanishing lower frame bound."""
    pass


class NotInvertibleError(GaborTorusError):
    """Raised when an algebra element has no numerically stable inverse."""
    pass


class UnsupportedLatticeError(GaborTorusError):
    """Raised for lattice shapes a backend does not implement."""
    pass


class UnsupportedModelError(GaborTorusError):
    """Raised for operations that are undefined in the requested model."""
    pass


class IncommensurateShiftError(GaborTorusError):
    """Raised when a continuum shift does not land on the sampling grid."""
    pass


class LatticeApproximationError(GaborTorusError):
    """Raised when no divisor lattice matches a requested density."""
    pass


class NumericalError(GaborTorusError):
    """Raised when a dense eigensolve or factorization fails."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition


class ConvergenceNotCertifiedError(GaborTorusError):
    """
    Raised when a truncated lattice sum cannot be certified.

    The uncertified value is attached as ``result`` so callers can still
    inspect it.
    """

    exit_code = 4

    def __init__(self, message: str, result: Any = None, tail_bound: Optional[float] = None):
        super().__init__(message)
        self.result = result
        self.tail_bound = tail_bound


class InsufficientRadiusError(GaborTorusError):
    """Raised when a truncation radius leaves a tail above tolerance."""

    exit_code = 4

    def __init__(self, message: str, radius: Optional[float] = None, tail_bound: Optional[float] = None):
        super().__init__(message)
        self.radius = radius
        self.tail_bound = tail_bound
