"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): precondition
violations (bad inputs, evaluation requested where a representation is not
valid) and numerical failures (an algorithm gave up). Everything derives
from FhzetaError.
"""


class FhzetaError(Exception):
    """Base class for all package errors."""


class PreconditionError(FhzetaError, ValueError):
    """An operation was called outside its contract. CLI exit code 2."""


class NumericalError(FhzetaError, ArithmeticError):
    """A numerical procedure failed to converge or lost control. CLI exit code 3."""


# --- special-function kernels ---

class PoleAtNonpositiveInteger(PreconditionError):
    """log-gamma requested within pole tolerance of 0, -1, -2, ..."""


class NonpositiveOrder(PreconditionError):
    """Incomplete gamma needs order a > 0."""


class NegativeArgument(PreconditionError):
    """Incomplete gamma needs argument x >= 0."""


# --- zeta evaluation ---

class OutOfRegion(PreconditionError):
    """Direct integral representation requested at Re(s) <= 1."""


class InsufficientStrip(PreconditionError):
    """Continuation of depth n requested at Re(s) <= 1 - n."""


class PoleProximity(PreconditionError):
    """Evaluation point too close to a pole of a gamma term in the continuation."""


class PoleOfZeta(PreconditionError):
    """zeta_a requested at (or within tolerance of) s in {1, 0, -1, -2, ...}."""


class PoleAtOne(PreconditionError):
    """Classical zeta oracle requested at s = 1."""


# --- zero analysis ---

class BoundaryTooCloseToSingularity(PreconditionError):
    """Contour boundary runs within 1e-3 of a known pole or trivial zero."""


class PhaseTrackingFailed(NumericalError):
    """Boundary phase steps could not be refined below pi/2, or phase did not close."""


class NoSignChange(PreconditionError):
    """Bisection bracket endpoints have the same sign."""


class PoleInBracket(PreconditionError):
    """Bisection bracket contains a pole of zeta_a."""


class GridOutsideStrip(PreconditionError):
    """Positivity grid point outside the requested upper half-strip."""


class MonotonicityViolated(PreconditionError):
    """Oscillatory-positivity integrand failed its monotonicity precondition."""


class PhaseAnchorInvalid(PreconditionError):
    """Log-oscillation start point x~ does not satisfy t*ln(x~) = 2*pi*k."""
