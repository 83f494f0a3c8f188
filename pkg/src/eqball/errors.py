"""Exception hierarchy for eqball.

Every error raised by the library derives from EqBallError so callers can
catch the whole family; the CLI maps these to exit code 2.
"""


class EqBallError(Exception):
    """Base class for all eqball errors."""


class DimensionMismatch(EqBallError):
    """Inputs do not share the expected ambient dimension."""


class FullSpan(EqBallError):
    """Orthogonal complement requested of a full-dimensional span."""


class DegenerateInput(EqBallError):
    """Two points coincide where distinct points are required."""


class InvalidK(EqBallError):
    """Simplex size parameter out of range."""


class InvalidN(EqBallError):
    """Ambient dimension out of range."""


class InvalidSet(EqBallError):
    """A point list violates the equilateral-set invariants."""


class TooLarge(EqBallError):
    """Requested equilateral set exceeds size n+1."""


class RadiusOutOfRange(EqBallError):
    """Radius parameter outside its admissible interval."""


class NormMismatch(EqBallError):
    """A point's norm disagrees with the value the construction requires."""


class SamplingFailure(EqBallError):
    """Rejection sampling exhausted its attempt budget."""


class AlreadyMaximal(EqBallError):
    """Enlargement step applied to a set that is already maximal."""


class NotInBall(EqBallError):
    """A point lies outside the closed unit ball beyond tolerance."""


class NotCentered(EqBallError):
    """A set expected to have its center at the origin does not."""


class OutsideBall(EqBallError):
    """Input point lies outside the closed unit ball."""


class EmptyIntersection(EqBallError):
    """Subspace intersection is {0} where a direction is needed."""


class PreconditionDistance(EqBallError):
    """Pair distance does not match the required hop length."""


class PreconditionClearance(EqBallError):
    """Clearance around the midpoint is below the required radius."""


class PreconditionViolation(EqBallError):
    """A documented operation precondition does not hold."""


class NotSymmetric(EqBallError):
    """Matrix expected to be symmetric is not."""


class EvaluationFailure(EqBallError):
    """Weight function returned a non-finite value."""


class ClearanceFailure(EqBallError):
    """An emitted link move failed its clearance re-check (internal bug guard)."""


class NormWindowViolation(EqBallError):
    """A constructed companion point fell outside its guaranteed norm window."""


class RadiusSolveFailure(EqBallError):
    """Bisection could not bracket the requested radius equation."""


class TargetOutOfRange(EqBallError):
    """Inverse-function target outside the function's range."""


class GenerationFailure(EqBallError):
    """Certificate generation failed; carries the stage where it happened."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class MalformedCertificate(EqBallError):
    """Certificate document is structurally invalid."""


class ExpressionError(EqBallError):
    """Weight-function expression failed to parse or evaluate."""
