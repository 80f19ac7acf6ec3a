"""Exception hierarchy shared by every module."""


class FracGelfandError(Exception):
    """Base class for all package errors."""


class DomainError(FracGelfandError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a kernel singularity."""


class AccuracyError(FracGelfandError, ArithmeticError):
    """A quadrature did not reach its tolerance within the node budget.

    The best available estimate and its error bound are kept on the
    exception so callers can still inspect them.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class StructureError(FracGelfandError):
    """A computed quantity has a qualitatively unexpected shape
    (for instance a stability margin with several sign changes)."""
