"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: parameter problems exit 1, negative
analysis verdicts exit 2, and internal numerical failures exit 3.
"""

from __future__ import annotations


class WavefrontError(Exception):
    """Base class for all toolkit-specific errors."""


class NumericsError(WavefrontError):
    """Base class for failures inside the numerical machinery (exit code 3)."""


class NonConvergence(NumericsError):
    """An iterative procedure exhausted its budget without meeting tolerance."""


class InvalidEnvelope(WavefrontError, ValueError):
    """An exponential decay envelope with a non-positive rate was supplied."""


class NoSignChange(NumericsError):
    """A bracketing step found no sign change, so no root can be isolated."""


class MaxIterations(NumericsError):
    """A root or Newton solve hit its iteration cap."""


class SingularJacobian(NumericsError):
    """The finite-difference Jacobian of a 2-D solve is numerically singular."""


class DomainError(WavefrontError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateKernel(WavefrontError):
    """Normalization is impossible: the half-line integral vanishes."""


class TangentialZero(WavefrontError):
    """The kernel touches zero without crossing, violating transversality."""


class MarginViolation(WavefrontError):
    """A threshold-condition partial integral failed its strict inequality.

    Carries the indices of the failing crossings so classification can report
    which inequality broke.
    """

    def __init__(self, message: str, failing_indices: list[int] | None = None):
        super().__init__(message)
        self.failing_indices = failing_indices or []


class NoRoot(NumericsError):
    """The compatibility equation has no root inside the admissible bracket."""


class MultipleRoots(NumericsError):
    """A dense scan found several roots where theory guarantees one.

    This signals a misclassification upstream rather than a property of the
    model, so it is treated as an internal failure.
    """


class NonPositiveSlope(NumericsError):
    """The stability index slope at the origin is not positive."""


class ContourTooCoarse(NumericsError):
    """Adjacent contour phases still jump by >= pi after adaptive refinement."""


class NoPositiveRoot(WavefrontError):
    """The closed-form speed quadratic has no positive root at these parameters."""


class ComplexEigenvalues(WavefrontError, ValueError):
    """Feedback parameters put the linear eigenvalue pair off the real axis."""


class SlowBranchOnly(WavefrontError):
    """Every converged pulse root travels far below the front speed."""


class NoBackLevel(WavefrontError):
    """No feedback level equalizes the back and front speeds."""
