"""Exception hierarchy shared by all xxcorr modules."""


class XXCorrError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(XXCorrError):
    """An argument lies outside the supported parameter domain."""


class PoleError(XXCorrError):
    """Evaluation requested at (or too close to) a pole."""


class BranchCutError(XXCorrError):
    """Evaluation requested on (or too close to) a branch cut, or a
    contour branch-tracking certificate failed."""


class GeometryError(XXCorrError):
    """A contour failed a geometric certificate (winding, closure,
    separation, or self-intersection)."""


class ConvergenceError(XXCorrError):
    """An iterative or quadrature computation failed its self-check."""


class SingularSystemError(XXCorrError):
    """A moment linear system is numerically singular.  For the
    orthogonal-polynomial solve this signals proximity to one of the
    isolated reduced-time values where the polynomials do not exist."""

    def __init__(self, message, tau=None, condition=None):
        super().__init__(message)
        self.tau = tau
        self.condition = condition


class OnContourError(XXCorrError):
    """Evaluation point lies on (or too close to) the integration contour."""


class ResourceError(XXCorrError):
    """The requested computation exceeds configured resource limits."""
