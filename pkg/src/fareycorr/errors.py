"""Exception hierarchy.

Every failure mode the CLI maps to a distinct exit code has its own class;
library callers can catch ``FareyCorrError`` for anything raised on purpose.
"""


class FareyCorrError(Exception):
    """Base class for all errors raised deliberately by this package."""


class InputValidationError(FareyCorrError):
    """An argument violates a documented precondition."""


class SizingError(FareyCorrError):
    """A request exceeds a configured memory/size ceiling."""


class ConvergenceError(FareyCorrError):
    """An adaptive computation hit its depth/cell budget before reaching tol.

    Carries the partial bracket so the caller can see how far it got.
    """

    def __init__(self, message: str, lower: float = 0.0, upper: float = 0.0):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
