"""Exception types raised across the package."""


class TMellinError(Exception):
    """Base class for all package errors."""


class DomainError(TMellinError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DivergenceError(TMellinError, ArithmeticError):
    """The requested transform does not exist (the integral diverges)."""


class UnsupportedError(TMellinError, NotImplementedError):
    """The function lacks a capability an operation needs (derivative, antiderivative, order)."""


class ConvergenceError(TMellinError, ArithmeticError):
    """An iterative solver failed to converge."""


class FitError(TMellinError, AssertionError):
    """An exact fit left a nonzero residual."""


class ScaleError(TMellinError, ValueError):
    """Requested size exceeds what an exhaustive routine will enumerate."""


class TruncationWarning(UserWarning):
    """A truncated integral may be missing a non-negligible tail."""
