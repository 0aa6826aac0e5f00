"""Exception types raised by fractheta."""


class FracThetaError(Exception):
    """Base class for all package errors."""


class ConstraintViolation(FracThetaError, ValueError):
    """A scheme parameter lies outside the admissible range of its family."""

    def __init__(self, message, constraint=None, bound=None):
        super().__init__(message)
        self.constraint = constraint
        self.bound = bound


class DegenerateWeight(FracThetaError, ValueError):
    """The leading weight vanishes, so the recurrence cannot be started."""


class PoleEvaluation(FracThetaError, ValueError):
    """A closed-form expression was evaluated at one of its singular points."""


class InvalidBeta(FracThetaError, ValueError):
    """Singular exponent is a negative integer."""


class LengthMismatch(FracThetaError, ValueError):
    """Sample or weight arrays do not match the grid."""


class MalformedRange(FracThetaError, ValueError):
    """A step-size list could not be parsed."""


class NumericalFailure(FracThetaError, ArithmeticError):
    """Base class for failures inside a numerical solve."""


class SingularSystem(NumericalFailure):
    """A small dense system has a pivot below the admissible threshold."""


class StepSingular(NumericalFailure):
    """The implicit step equation has a (near) zero coefficient."""
