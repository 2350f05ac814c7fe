"""Traveling front profiles and their threshold validation.

The front ``U`` solves the delayed reduced equation at the unique wave speed;
its closed-form representation is assembled from anchored half-line integrals
of the kernel, so evaluation never exponentiates a growing argument.  The
quadrature route recomputes the same integrals through the adaptive engine
for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import Kernel
from .numerics import (
    DEFAULT_SETTINGS,
    Bracket,
    QuadratureSettings,
    find_root_bracketed,
    integrate_halfline,
    integrate_interval,
    scan_sign_changes,
)
from .wavespeed import ModelParams


@dataclass(frozen=True)
class FrontSolution:
    """A kernel, model parameters and the compatibility root that bind a front."""

    kernel: Kernel
    params: ModelParams
    mu0: float

    @property
    def _factors(self):
        c0, mu = self.params.c0, self.mu0
        if math.isinf(c0):
            return 1.0, 1.0, 1.0 / mu, 1.0 / mu
        return c0 / (c0 - mu), c0 / (c0 + mu), 1.0 / mu - 1.0 / c0, 1.0 / mu + 1.0 / c0


def shifted_argument(front: FrontSolution, z):
    """The delayed spatial argument ``c0*z / (c0 + sgn(z)*mu0)``."""
    km, kp, _, _ = front._factors
    z = np.asarray(z, dtype=float)
    out = np.where(z <= 0, km * z, kp * z)
    return float(out) if not out.shape else out


def front_drive(front: FrontSolution, z):
    """The synaptic drive ``alpha * integral_{-inf}^{shifted(z)} K``."""
    return front.params.alpha * front.kernel.cdf(shifted_argument(front, z))


def _history_integral(front: FrontSolution, z):
    """``integral_{-inf}^{z} of the decay-weighted delayed kernel`` (vectorized).

    This is the quantity ``mu0 * U'(z) / alpha``; every exponential inside is
    anchored so its argument has non-positive real part.
    """
    km, kp, eta, eta_p = front._factors
    kernel, mu = front.kernel, front.mu0
    z = np.asarray(z, dtype=float)
    scalar = not z.shape
    z = np.atleast_1d(z)
    out = np.empty(z.shape)
    neg = z <= 0
    if np.any(neg):
        out[neg] = np.real(kernel.left_rep.tail_integral(eta, km * z[neg]))
    if np.any(~neg):
        zp = z[~neg]
        left_full = np.real(kernel.left_rep.tail_integral(eta, 0.0))
        out[~neg] = np.exp(-zp / mu) * left_full + np.real(
            kernel.right_rep.anchored_partial_integral(eta_p, kp * zp)
        )
    return float(out[0]) if scalar else out


def _history_integral_quadrature(front: FrontSolution, z: float, settings: QuadratureSettings) -> float:
    km, kp, eta, eta_p = front._factors
    kernel, mu = front.kernel, front.mu0
    big_c, _ = kernel.envelope
    if z <= 0:
        w = km * z
        f = lambda u: np.exp(eta * u) * kernel.eval(u + w)
        return integrate_halfline(f, "left", (big_c, eta), settings)
    left_full = integrate_halfline(
        lambda u: np.exp(eta * u) * kernel.eval(u), "left", (big_c, eta), settings
    )
    xi = kp * z
    finite = integrate_interval(
        lambda v: np.exp(eta_p * (v - xi)) * kernel.eval(v), 0.0, xi, settings
    )
    return math.exp(-z / mu) * left_full + finite


def front_value(front: FrontSolution, z, method: str = "closed", settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Front displacement ``U(z)``; vectorized over ``z`` for the closed form."""
    alpha = front.params.alpha
    if method == "quadrature":
        zf = float(z)
        drive = alpha * _cdf_quadrature(front.kernel, shifted_argument(front, zf), settings)
        return drive - alpha * _history_integral_quadrature(front, zf, settings)
    return front_drive(front, z) - alpha * _history_integral(front, z)


def front_derivative(front: FrontSolution, z, method: str = "closed", settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Front slope ``U'(z) = (alpha/mu0) * history integral``."""
    alpha, mu = front.params.alpha, front.mu0
    if method == "quadrature":
        return alpha / mu * _history_integral_quadrature(front, float(z), settings)
    return alpha / mu * _history_integral(front, z)


def _cdf_quadrature(kernel: Kernel, w: float, settings: QuadratureSettings) -> float:
    big_c, rho = kernel.envelope
    if w <= 0:
        return integrate_halfline(lambda u: kernel.eval(u + w), "left", (big_c, rho), settings)
    half = integrate_halfline(kernel.eval, "left", (big_c, rho), settings)
    return half + integrate_interval(kernel.eval, 0.0, w, settings)


@dataclass(frozen=True)
class FrontValidation:
    """Threshold and limit checks of a solved front on a finite window."""

    threshold_at_zero: float
    derivative_at_zero: float
    left_max: float
    right_min: float
    left_limit: float
    right_limit: float
    interior_extrema: tuple[tuple[float, float], ...]
    passed: bool


def validate_front(
    front: FrontSolution,
    z_window: float | None = None,
    n_samples: int = 2001,
    threshold_tol: float = 1e-8,
    tail_tol_scale: float = 1e-5,
) -> FrontValidation:
    """Check the defining properties of the front on ``[-z_window, z_window]``.

    Interior extrema are located through sign changes of the derivative and
    the front is evaluated exactly there, so narrow humps near the threshold
    cannot slip between samples.  ``passed`` requires the threshold crossing
    at the origin, a positive slope there, all left extrema below / right
    extrema above threshold, and tails within ``tail_tol_scale * alpha`` of
    the resting and excited levels.
    """
    if n_samples < 100:
        raise ValueError("validation needs at least 100 samples")
    kernel, params, mu = front.kernel, front.params, front.mu0
    alpha, theta = params.alpha, params.theta
    if z_window is None:
        z_window = 40.0 / kernel.envelope[1]

    u0 = float(front_value(front, 0.0))
    du0 = float(front_derivative(front, 0.0))

    # interior extrema of U from sign changes of the history integral
    zs = np.linspace(-z_window, z_window, n_samples)
    zs = zs[np.abs(zs) > 1e-9]
    slope = lambda z: float(_history_integral(front, z))
    extrema = []
    for br in scan_sign_changes(slope, zs):
        z_star = find_root_bracketed(slope, br, tol=1e-11)
        extrema.append((float(z_star), float(front_value(front, z_star))))

    left_vals = [u for z, u in extrema if z < 0]
    right_vals = [u for z, u in extrema if z > 0]
    left_limit = float(front_value(front, -z_window))
    right_limit = float(front_value(front, z_window))
    left_max = max(left_vals) if left_vals else left_limit
    right_min = min(right_vals) if right_vals else right_limit

    passed = (
        abs(u0 - theta) <= threshold_tol
        and du0 > 0
        and left_max < theta
        and right_min > theta
        and abs(left_limit) <= tail_tol_scale * alpha
        and abs(right_limit - alpha) <= tail_tol_scale * alpha
    )
    return FrontValidation(
        threshold_at_zero=u0,
        derivative_at_zero=du0,
        left_max=float(left_max),
        right_min=float(right_min),
        left_limit=left_limit,
        right_limit=right_limit,
        interior_extrema=tuple(extrema),
        passed=bool(passed),
    )


def front_profile(front: FrontSolution, z_lo: float, z_hi: float, n: int) -> list[tuple[float, float, float]]:
    """Uniform ``(z, U, U')`` samples for export."""
    if not z_lo < z_hi:
        raise ValueError("need z_lo < z_hi")
    zs = np.linspace(z_lo, z_hi, n)
    us = np.atleast_1d(front_value(front, zs))
    dus = np.atleast_1d(front_derivative(front, zs))
    return list(zip(map(float, zs), map(float, us), map(float, dus)))
