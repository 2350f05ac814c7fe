"""Stability index function, right-half-plane scans, and the rational certificate.

The stability index is a complex-analytic function on ``Re(lambda) > -1``
whose zeros there are exactly the point-spectrum eigenvalues of the front's
linearization.  The scan walks the boundary of the right-half-plane region
``{Re >= 0, delta <= |lambda| <= R}`` and counts zeros by summed phase
increments; when the kernel's left-half Laplace transform is a low-degree
rational function, a closed-form argument certifies stability outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContourTooCoarse, DomainError, NonPositiveSlope
from .front import FrontSolution
from .kernels import Kernel
from .numerics import DEFAULT_SETTINGS, QuadratureSettings, integrate_halfline
from .wavespeed import repeated_integral_transform, speed_index


@dataclass(frozen=True)
class EvansContext:
    """A solved front together with its cached speed-index value."""

    front: FrontSolution
    phi_mu0: float

    @classmethod
    def from_front(cls, front: FrontSolution) -> "EvansContext":
        phi = float(speed_index(front.kernel, front.params.c0, front.mu0))
        if abs(phi - front.params.level) > 1e-6:
            raise DomainError(
                f"front is not on the compatibility level: phi={phi}, level={front.params.level}"
            )
        return cls(front, phi)


def _weight_exponent(ctx: EvansContext, lam):
    c0, mu = ctx.front.params.c0, ctx.front.mu0
    shift = 0.0 if math.isinf(c0) else 1.0 / c0
    return (np.asarray(lam, dtype=complex) + 1.0) / mu - shift


def evans_function(ctx: EvansContext, lam, method: str = "closed", settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Evaluate the stability index at ``lam`` (vectorized for the closed form).

    Defined for ``Re(lam) > -1``.  The closed form evaluates the analytic
    continuation of the weighted kernel transform; the quadrature route
    integrates the complex-weighted kernel directly and requires the weight
    to decay, which holds throughout the scanned right half-plane.
    """
    lam_arr = np.asarray(lam, dtype=complex)
    if np.any(lam_arr.real <= -1.0):
        raise DomainError("stability index is defined for Re(lambda) > -1")
    s = _weight_exponent(ctx, lam_arr)
    kernel = ctx.front.kernel
    if method == "quadrature":
        s_c = complex(s)
        big_c, rho = kernel.envelope
        if s_c.real + rho <= 0:
            raise DomainError("quadrature weight does not decay at this lambda")
        num = integrate_halfline(
            lambda x: np.exp(s_c * x) * kernel.eval(x), "left", (big_c, s_c.real + rho), settings
        )
        return 1.0 - num / ctx.phi_mu0
    num = kernel.left_rep.halfline_transform(s, continued=True)
    out = 1.0 - num / ctx.phi_mu0
    return out if np.asarray(out).shape else complex(out)


@dataclass(frozen=True)
class EssentialSpectrum:
    """The far-field spectrum: a vertical line in the complex plane."""

    re_part: float
    description: str


def essential_spectrum() -> EssentialSpectrum:
    """The essential spectrum of the linearization about any front.

    It is the vertical line ``Re(lambda) = -1`` independent of the kernel and
    parameters, a margin of 1 to the left of the imaginary axis.
    """
    return EssentialSpectrum(-1.0, "vertical line Re(lambda) = -1")


def evans_slope_at_zero(ctx: EvansContext) -> float:
    """Exact slope of the stability index at the origin.

    Equals ``mu0 * phi'(mu0) / phi(mu0)``; positivity certifies that the
    origin is an algebraically simple eigenvalue.
    """
    front = ctx.front
    phi_slope = repeated_integral_transform(front.kernel, front.params.c0, 0, front.mu0) / front.mu0**2
    slope = front.mu0 * phi_slope / ctx.phi_mu0
    if not slope > 0:
        raise NonPositiveSlope(
            f"slope at the origin is {slope}; the classification upstream is inconsistent"
        )
    return float(slope)


@dataclass(frozen=True)
class EvansScan:
    """Right-half-plane survey of the stability index modulus.

    ``winding`` counts zeros inside the scanned annular region by the
    argument principle; ``stable`` requires zero winding and a modulus floor
    away from the excluded disk around the origin.
    """

    delta: float
    radius: float
    re_grid: np.ndarray
    im_grid: np.ndarray
    abs_grid: np.ndarray
    min_modulus: float
    winding: int
    stable: bool

    def rows(self):
        """Flat ``(re, im, abs)`` rows for export, row-major over the grid."""
        for i, re in enumerate(self.re_grid):
            for j, im in enumerate(self.im_grid):
                yield float(re), float(im), float(self.abs_grid[i, j])


def winding_number(ctx: EvansContext, path, max_depth: int = 42) -> int:
    """Zeros enclosed by a parametric closed path, by summed phase increments.

    ``path`` maps ``t`` in ``[0, 1]`` to complex ``lambda``; segments whose
    phase step reaches ``pi/2`` are bisected in parameter space until machine
    resolution, and a residual step of ``pi`` or more raises
    :class:`ContourTooCoarse`.
    """
    f = lambda t: complex(evans_function(ctx, path(t)))
    total = 0.0
    # moderate uniform seeding so symmetric paths cannot alias the phase
    ts = np.linspace(0.0, 1.0, 17)
    vs = [f(t) for t in ts]
    stack = list(zip(ts[:-1], vs[:-1], ts[1:], vs[1:]))
    min_dt = 1.0 / 2**max_depth
    while stack:
        ta, fa, tb, fb = stack.pop()
        dphi = np.angle(fb / fa)
        if abs(dphi) < 0.5 * math.pi:
            total += dphi
            continue
        if tb - ta <= min_dt:
            if abs(dphi) >= math.pi:
                raise ContourTooCoarse(
                    f"phase jump {dphi:.3f} rad persists at parameter resolution {tb - ta:.2e}"
                )
            total += dphi
            continue
        tm = 0.5 * (ta + tb)
        fm = f(tm)
        stack.append((ta, fa, tm, fm))
        stack.append((tm, fm, tb, fb))
    return int(round(total / (2.0 * math.pi)))


def _region_path(delta: float, radius: float):
    """CCW boundary of ``{Re >= 0, delta <= |lambda| <= R}`` as one parametric loop."""
    # lengths guide the parameter allocation: down the axis, around the small
    # arc, down the axis, back over the big arc
    seg_len = np.array([radius - delta, math.pi * delta, radius - delta, math.pi * radius])
    cuts = np.concatenate([[0.0], np.cumsum(seg_len / np.sum(seg_len))])
    cuts[-1] = 1.0

    def path(t: float) -> complex:
        t = min(max(t, 0.0), 1.0)
        if t <= cuts[1]:
            u = (t - cuts[0]) / (cuts[1] - cuts[0])
            return 1j * (radius + u * (delta - radius))
        if t <= cuts[2]:
            u = (t - cuts[1]) / (cuts[2] - cuts[1])
            ang = 0.5 * math.pi - u * math.pi
            return delta * complex(math.cos(ang), math.sin(ang))
        if t <= cuts[3]:
            u = (t - cuts[2]) / (cuts[3] - cuts[2])
            return -1j * (delta + u * (radius - delta))
        u = (t - cuts[3]) / (1.0 - cuts[3])
        ang = -0.5 * math.pi + u * math.pi
        return radius * complex(math.cos(ang), math.sin(ang))

    return path, cuts


def scan_right_half_plane(
    ctx: EvansContext,
    delta: float = 1e-3,
    radius: float = 50.0,
    n_grid: int = 128,
    n_contour: int = 4096,
) -> EvansScan:
    """Survey ``|index|`` on ``[0,R] x [-R,R]`` and count zeros in the region.

    The grid omits the ``delta`` disk around the known origin zero; the
    winding number is computed along the region boundary with adaptive phase
    refinement seeded at ``n_contour`` points.  ``stable`` means zero winding
    with the modulus bounded away from zero relative to the grid scale.
    """
    if not 0 < delta < radius:
        raise ValueError("need 0 < delta < radius")
    if n_grid < 64 or n_contour < 64:
        raise ValueError("grids of at least 64 points are required")

    res = np.linspace(0.0, radius, n_grid)
    ims = np.linspace(-radius, radius, n_grid)
    lam = res[:, None] + 1j * ims[None, :]
    vals = np.abs(np.asarray(evans_function(ctx, lam)))
    inside_hole = np.abs(lam) < delta
    vals_masked = np.where(inside_hole, np.nan, vals)

    path, cuts = _region_path(delta, radius)
    # every boundary segment gets samples, however short it is in parameter
    t_chunks = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        count = max(64, int(round(n_contour * (hi - lo))))
        t_chunks.append(np.linspace(lo, hi, count, endpoint=False))
    t_samples = np.concatenate(t_chunks)
    contour_vals = np.abs(np.asarray(evans_function(ctx, np.array([path(t) for t in t_samples]))))

    min_modulus = min(float(np.nanmin(vals_masked)), float(np.min(contour_vals)))
    winding = winding_number(ctx, path)
    floor = 1e-6 * float(np.nanmax(vals_masked))
    stable = winding == 0 and min_modulus > floor
    return EvansScan(
        delta=float(delta),
        radius=float(radius),
        re_grid=res,
        im_grid=ims,
        abs_grid=vals_masked,
        min_modulus=min_modulus,
        winding=int(winding),
        stable=bool(stable),
    )


def origin_winding(ctx: EvansContext, delta: float = 1e-3) -> int:
    """Winding on the circle ``|lambda| = delta``; 1 for a simple origin zero."""
    path = lambda t: delta * complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
    return winding_number(ctx, path)


@dataclass(frozen=True)
class RationalLaplaceCertificate:
    """Degrees of the kernel's left-half Laplace transform and the verdict.

    ``applicable`` requires numerator and denominator degrees at most two;
    for an applicable classified kernel the front is spectrally stable by the
    closed-form quadratic argument.
    """

    p_degree: int
    q_degree: int
    applicable: bool
    spectrally_stable: bool
    p_coeffs: tuple[float, ...]
    q_coeffs: tuple[float, ...]


def rational_laplace_certificate(kernel: Kernel, ctx: EvansContext | None = None) -> RationalLaplaceCertificate:
    """Assemble ``integral e^{sx} K`` on the left half-line as ``p(s)/q(s)``.

    The transform of each representation term is a simple-pole (or
    double-pole) rational function; the common-denominator assembly below is
    exact up to rounding.  Coefficients are returned in ascending order.
    """
    del ctx  # the certificate depends on the kernel alone
    terms = kernel.left_rep.terms
    # least common denominator: (s + rate)^max(power+1) over distinct rates
    mult: dict[complex, int] = {}
    for t in terms:
        mult[t.rate] = max(mult.get(t.rate, 0), t.power + 1)
    q = np.array([1.0 + 0.0j])
    for rate, count in mult.items():
        fac = np.array([rate, 1.0 + 0.0j])  # ascending coefficients of (rate + s)
        for _ in range(count):
            q = np.convolve(q, fac)
    # numerator: each term's transform times the complementary factors
    p = np.zeros(1, dtype=complex)
    for t in terms:
        contrib = np.array([t.coef * (-1.0) ** t.power * math.factorial(t.power)], dtype=complex)
        for rate, count in mult.items():
            remaining = count - (t.power + 1 if rate == t.rate else 0)
            fac = np.array([rate, 1.0 + 0.0j])
            for _ in range(remaining):
                contrib = np.convolve(contrib, fac)
        p = np.polynomial.polynomial.polyadd(p, contrib)

    # conjugate term pairs make both polynomials real
    p_real = np.real_if_close(p, tol=1e6)
    q_real = np.real_if_close(q, tol=1e6)
    p_deg = _trimmed_degree(p_real)
    q_deg = _trimmed_degree(q_real)
    applicable = p_deg <= 2 and q_deg <= 2
    return RationalLaplaceCertificate(
        p_degree=p_deg,
        q_degree=q_deg,
        applicable=applicable,
        spectrally_stable=applicable,
        p_coeffs=tuple(float(np.real(c)) for c in p_real),
        q_coeffs=tuple(float(np.real(c)) for c in q_real),
    )


def _trimmed_degree(coeffs: np.ndarray) -> int:
    mags = np.abs(coeffs)
    scale = float(np.max(mags)) if mags.size else 0.0
    deg = -1
    for k, m in enumerate(mags):
        if m > 1e-9 * max(scale, 1e-300):
            deg = k
    return deg
