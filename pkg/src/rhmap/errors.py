"""Exception hierarchy shared by all modules."""


class RHMapError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RHMapError, ValueError):
    """Input does not satisfy a documented precondition."""


class NumericalFailure(RHMapError, ArithmeticError):
    """A numerical procedure could not reach the requested accuracy."""


class DegenerateCurve(ValidationError):
    pass


class GenusTooSmall(ValidationError):
    pass


class OpenLift(ValidationError):
    """The loop does not lift to a closed loop on the double cover."""


class PathBlocked(ValidationError):
    pass


class BasepointMismatch(ValidationError):
    pass


class MissingLoop(ValidationError, KeyError):
    pass


class ExactModeUnavailable(ValidationError):
    pass


class ConfigInvalid(ValidationError):
    """Raised by config parsing; ``errors`` maps field paths to messages."""

    def __init__(self, errors):
        self.errors = dict(errors)
        msg = "; ".join(f"{k}: {v}" for k, v in sorted(self.errors.items()))
        super().__init__(msg or "invalid configuration")


class StepUnderflow(NumericalFailure):
    pass


class MaxStepsExceeded(NumericalFailure):
    pass
