"""Exception hierarchy.

Validation problems derive from :class:`ValueError`; numerical
non-convergence derives from :class:`ArithmeticError`. The CLI maps the
first family to exit code 2 and the second to exit code 3.
"""


class QuietzoneError(Exception):
    """Base class for all package errors."""


class ConfigurationError(QuietzoneError, ValueError):
    """Invalid source layout, incident field or run parameters."""


class CapabilityError(QuietzoneError, ValueError):
    """Request outside the validated order/argument range of the special functions."""


class SingularityError(QuietzoneError, ValueError):
    """Evaluation at (or numerically on top of) a point singularity."""


class BranchAmbiguityError(QuietzoneError, ValueError):
    """Addition theorem requested with ``|x| == |y|``, where neither branch converges."""


class DomainError(QuietzoneError, ValueError):
    """Field requested inside an impenetrable scatterer."""


class TruncationError(QuietzoneError, ArithmeticError):
    """A truncated series or quadrature did not reach its tolerance.

    Attributes
    ----------
    estimate : float
        Best error (or tail) estimate reached before giving up.
    """

    def __init__(self, message, estimate=float("nan")):
        super().__init__(message)
        self.estimate = estimate
