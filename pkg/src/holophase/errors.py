"""Exception types raised across the package."""


class HolophaseError(Exception):
    """Base class for all package errors."""


class SizeError(HolophaseError, ValueError):
    """Grid length is invalid or two signals live on different grids."""


class SingularityError(HolophaseError, ZeroDivisionError):
    """Evaluation requested at (or numerically on top of) a pole."""


class DomainError(HolophaseError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class DegenerateInputError(HolophaseError, ValueError):
    """Input carries no information the operation can act on (e.g. F == 0)."""


class NumericalInstabilityError(HolophaseError, RuntimeError):
    """A computed quantity failed its a-posteriori verification."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class NoFixedPointError(HolophaseError, RuntimeError):
    """Iteration did not settle on an attracting interior fixed point."""
