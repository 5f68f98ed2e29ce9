"""Exception hierarchy shared by every module."""


class RadialSpecError(Exception):
    """Base class for all errors raised by this package."""


class IntegrationFailure(RadialSpecError):
    """An ODE solve or a quadrature did not converge within its budget.

    ``partial`` holds the best estimate reached (a partial integral, or the
    last ``t`` reached by an ODE solve) and ``achieved`` the error estimate
    or step size at the point of failure, when known.
    """

    def __init__(self, message, partial=None, achieved=None):
        super().__init__(message)
        self.partial = partial
        self.achieved = achieved


class IncompleteSurface(RadialSpecError):
    """The arclength integral appears to converge at the domain boundary."""


class HypothesisViolation(RadialSpecError):
    """A sampled assumption behind an estimate failed; ``witness`` is the offending point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionViolation(RadialSpecError):
    """The caller chose inputs outside an operation's domain."""


class SingularBasePoint(RadialSpecError):
    """Evaluation at a point where the warping function vanishes."""


class WrongBranch(RadialSpecError):
    """A bounded-only (or unbounded-only) check was called on the other branch."""


class HorizonTooShort(RadialSpecError):
    """Fewer zeros than requested were found before the horizon."""

    def __init__(self, message, zeros=None):
        super().__init__(message)
        self.zeros = zeros


class InsufficientData(RadialSpecError):
    """Not enough zeros (or samples) to evaluate a check."""


class SolverFailure(RadialSpecError):
    """Eigenvalue bracketing or root finding exhausted its budget."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class OutOfRange(RadialSpecError):
    """A requested eigenvalue lies outside the reachable part of the curve."""


class ConfigError(RadialSpecError):
    """Malformed experiment configuration or preset catalog entry."""
