"""Exception hierarchy for scalekit.

ParameterError signals invalid model parameters (CLI exit code 2); the
NumericalError family signals a computation that could not be completed to
tolerance (CLI exit code 1).
"""


class ScalekitError(Exception):
    """Base class for all scalekit errors."""


class ParameterError(ScalekitError, ValueError):
    """A parameter combination violates a model invariant."""


class CapabilityError(ScalekitError):
    """The request is valid but outside what this routine can evaluate stably."""


class NumericalError(ScalekitError):
    """A numerical procedure failed to converge or lost too much accuracy."""


class SaturationError(NumericalError):
    """An intermediate quantity exceeded floating-point range."""

    def __init__(self, msg: str, magnitude: float | None = None):
        super().__init__(msg)
        self.magnitude = magnitude


class ConditioningError(NumericalError):
    """A linear solve was too ill-conditioned; a tolerance change may help."""


class InversionError(NumericalError):
    """Numerical Laplace inversion did not meet its error target.

    Carries the best value obtained so far in ``best_value``.
    """

    def __init__(self, msg: str, best_value: float | None = None,
                 error_estimate: float | None = None):
        super().__init__(msg)
        self.best_value = best_value
        self.error_estimate = error_estimate


class NotApplicableError(ScalekitError):
    """The requested quantity is undefined for this model (e.g. ruin with zero drift)."""
