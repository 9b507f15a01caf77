"""Exception hierarchy shared by every module of the package."""


class CxOrderError(Exception):
    """Base class for all package errors."""


class PoleError(CxOrderError, ArithmeticError):
    """A gamma-function pole was hit where a finite value is required."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainError(CxOrderError, ValueError):
    """Argument outside the domain of a principal-branch operation."""


class PrecisionError(CxOrderError, ArithmeticError):
    """Catastrophic cancellation makes a series value meaningless."""


class SpecError(CxOrderError, ValueError):
    """An ODE parameter record violates one of its invariants."""


class SingularityError(CxOrderError, ArithmeticError):
    """Integration touched a point where ODE coefficients blow up."""
