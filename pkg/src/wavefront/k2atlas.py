"""Full classification atlas for the one-parameter oscillatory kernel family.

The family ``C(a) e^{-a|x|} (a sin|x| + cos x)`` admits closed forms for
everything on the ``(a, theta)`` plane with instantaneous transmission: the
signed first moment whose root splits the wave-speed condition kinds, a
quadratic equation for the wave speed itself, and the threshold boundary
curve that carves out the region of valid fronts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoPositiveRoot, NoSignChange
from .kernels import Kernel, KernelSpec, normalize
from .numerics import find_root_bracketed, scan_sign_changes


def family_kernel(a: float) -> Kernel:
    """The normalized family member at decay ``a``."""
    return normalize(KernelSpec("exp_sin_cos", {"a": float(a)}))


def first_moment(a):
    """Signed first moment ``integral_{-inf}^0 |x| K(x; a) dx`` (closed form).

    Positive for fast decay, negative for slow decay; the sign decides
    whether the family satisfies the monotone or the single-maximum
    wave-speed condition.
    """
    a = np.asarray(a, dtype=float)
    out = (3.0 * a**2 - 1.0) / (4.0 * a * (a**2 + 1.0))
    return float(out) if not out.shape else out


def moment_critical_decay(tol: float = 1e-10) -> float:
    """The unique decay value where the first moment changes sign.

    Located by a sign scan over ``(0.05, 5)`` followed by bracketed root
    refinement.
    """
    grid = np.linspace(0.05, 5.0, 400)
    brackets = scan_sign_changes(first_moment, grid)
    if not brackets:
        raise NoSignChange("first moment has no sign change on (0.05, 5)")
    return find_root_bracketed(first_moment, brackets[0], tol=tol)


def quadratic_wave_speed(a: float, theta: float) -> float:
    """Wave speed from the closed-form quadratic in ``1/mu``.

    The positive root of ``c2*x**2 + c1*x + c0`` with
    ``c2 = 2a(1-2t)``, ``c1 = 3a^2 - 8a^2 t - 1`` and
    ``c0 = -4at(a^2+1)`` gives ``mu = 1/x``.  Raises
    :class:`NoPositiveRoot` outside the validity regime.
    """
    if not (a > 0 and 0 < theta < 0.5):
        raise ValueError("need a > 0 and 0 < theta < 1/2")
    c2 = 2.0 * a * (1.0 - 2.0 * theta)
    c1 = 3.0 * a**2 - 8.0 * a**2 * theta - 1.0
    c0 = -4.0 * a * theta * (a**2 + 1.0)
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0:
        raise NoPositiveRoot(f"speed quadratic has complex roots at (a={a}, theta={theta})")
    sq = math.sqrt(disc)
    roots = [(-c1 + sq) / (2.0 * c2), (-c1 - sq) / (2.0 * c2)]
    positive = [r for r in roots if r > 0]
    if not positive:
        raise NoPositiveRoot(f"no positive quadratic root at (a={a}, theta={theta})")
    return 1.0 / max(positive)


def second_crossing(a) -> float:
    """Location ``M2(a)`` of the second axis crossing on the left half-line."""
    a = np.asarray(a, dtype=float)
    out = 2.0 * math.pi - np.arctan(1.0 / a)
    return float(out) if not out.shape else out


def threshold_boundary(a):
    """The curve ``g(a)`` below which the threshold condition fails.

    Equals the kernel mass beyond the second left crossing,
    ``sqrt(1+a^2) exp(-a M2(a)) / (4a)``; fronts exist for ``theta > g(a)``.
    """
    a = np.asarray(a, dtype=float)
    out = np.sqrt(1.0 + a**2) * np.exp(-a * second_crossing(a)) / (4.0 * a)
    return float(out) if not out.shape else out


@dataclass(frozen=True)
class AtlasPoint:
    """One classified point of the parameter plane."""

    a: float
    theta: float
    in_region: bool
    class_kind: str
    mu: float | None


@dataclass(frozen=True)
class AtlasGrid:
    """Classification of a rectangle of the parameter plane."""

    a_values: np.ndarray
    theta_values: np.ndarray
    in_region: np.ndarray
    class_kind: np.ndarray
    mu: np.ndarray
    a_star: float

    def rows(self):
        for i, a in enumerate(self.a_values):
            for j, th in enumerate(self.theta_values):
                mu = self.mu[i, j]
                yield (
                    float(a),
                    float(th),
                    bool(self.in_region[i, j]),
                    str(self.class_kind[i, j]),
                    float(mu) if np.isfinite(mu) else None,
                )


def atlas_point(a: float, theta: float, a_star: float | None = None) -> AtlasPoint:
    """Classify a single parameter pair."""
    if a_star is None:
        a_star = moment_critical_decay()
    in_region = bool(threshold_boundary(a) < theta < 0.5)
    if abs(a - a_star) < 1e-12:
        kind = "boundary"
    else:
        kind = "A" if first_moment(a) > 0 else "B"
    mu = quadratic_wave_speed(a, theta) if in_region else None
    return AtlasPoint(float(a), float(theta), in_region, kind, mu)


def region_scan(
    a_range: tuple[float, float] = (0.05, 3.0),
    theta_range: tuple[float, float] = (0.01, 0.49),
    resolution: int | tuple[int, int] = 300,
) -> AtlasGrid:
    """Fill a grid of the parameter plane with region and class verdicts.

    Membership comes from the threshold boundary, the class kind from the
    first-moment sign, and the wave speed from the quadratic wherever the
    point is inside the region.
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    if resolution[0] < 2 or resolution[1] < 2:
        raise ValueError("resolution must be at least 2 per axis")
    if not (0 < a_range[0] < a_range[1]):
        raise ValueError("decay range must be positive and increasing")
    if not (0 < theta_range[0] < theta_range[1] < 0.5):
        raise ValueError("threshold range must sit inside (0, 1/2)")

    a_vals = np.linspace(a_range[0], a_range[1], resolution[0])
    th_vals = np.linspace(theta_range[0], theta_range[1], resolution[1])
    g = threshold_boundary(a_vals)[:, None]
    in_region = th_vals[None, :] > g
    a_star = moment_critical_decay()

    kind = np.where(first_moment(a_vals) > 0, "A", "B").astype(object)
    kind[np.abs(a_vals - a_star) < 1e-12] = "boundary"
    kind_grid = np.broadcast_to(kind[:, None], in_region.shape).copy()

    mu = np.full(in_region.shape, np.nan)
    for i, a in enumerate(a_vals):
        cols = np.nonzero(in_region[i])[0]
        for j in cols:
            mu[i, j] = quadratic_wave_speed(float(a), float(th_vals[j]))
    return AtlasGrid(a_vals, th_vals, in_region, kind_grid, mu, float(a_star))
