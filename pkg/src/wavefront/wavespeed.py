"""Speed index function and the unique wave-speed solve.

The speed index ``phi(mu)`` is the exponentially weighted left-half-line
integral of the kernel; the traveling-front speed is the unique ``mu`` where
it meets the level ``1/2 - theta/alpha``.  The sign condition verdict from
the kernel module certifies which critical-point structure ``phi`` has, and
the solver independently confirms root uniqueness with a dense scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MultipleRoots, NoRoot
from .kernels import Kernel, WaveSpeedConditionReport, repeated_integral_rep
from .numerics import Bracket, find_root_bracketed, integrate_halfline


@dataclass(frozen=True)
class ModelParams:
    """Synaptic strength, firing threshold, and transmission speed."""

    alpha: float
    theta: float
    c0: float = math.inf

    def __post_init__(self):
        if not 0 < 2 * self.theta < self.alpha:
            raise DomainError(
                f"need 0 < 2*theta < alpha, got theta={self.theta}, alpha={self.alpha}"
            )
        if not self.c0 > 0:
            raise DomainError(f"transmission speed must be positive, got {self.c0}")

    @property
    def level(self) -> float:
        """The compatibility level ``1/2 - theta/alpha`` that phi must meet."""
        return 0.5 - self.theta / self.alpha


def _exponent(c0: float, mu) -> float:
    """Decay rate of the traveling-frame weight: ``1/mu - 1/c0``."""
    return 1.0 / mu - (0.0 if math.isinf(c0) else 1.0 / c0)


def _check_mu(c0: float, mu: float) -> None:
    if not 0 < mu or (not math.isinf(c0) and not mu < c0):
        raise DomainError(f"need 0 < mu < c0, got mu={mu}, c0={c0}")


def speed_index(kernel: Kernel, c0: float, mu, method: str = "closed"):
    """Evaluate ``phi(mu)``, vectorized over ``mu`` for the closed form.

    The closed form is exact for every built-in kernel; ``method="quadrature"``
    integrates the weighted kernel directly and serves as the independent
    cross-check.
    """
    if method == "quadrature":
        _check_mu(c0, float(mu))
        s = _exponent(c0, float(mu))
        big_c, rho = kernel.envelope
        return integrate_halfline(
            lambda x: np.exp(s * x) * kernel.eval(x), "left", (big_c, rho + s)
        )
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(mu_arr <= 0) or (not math.isinf(c0) and np.any(mu_arr >= c0)):
        raise DomainError(f"need 0 < mu < c0={c0}")
    out = np.real(kernel.left_rep.halfline_transform(_exponent(c0, mu_arr)))
    return float(out) if np.isscalar(mu) or not out.shape else out


def repeated_integral_transform(kernel: Kernel, c0: float, n: int, mu: float, method: str = "closed") -> float:
    """Weighted left-half-line integral of the depth-n repeated integral.

    Its sign matches the sign of ``phi'`` at the same ``mu``; depth 0 equals
    ``mu**2 * phi'(mu)``.
    """
    _check_mu(c0, mu)
    s = _exponent(c0, mu)
    rep = repeated_integral_rep(kernel, n)
    if method == "quadrature":
        big_c, rho = kernel.envelope
        # the repeated integral grows at most polynomially, so any positive
        # margin below s keeps the weighted integrand enveloped
        decay = min(s, rho) * 0.5 if n >= 1 else min(s * 0.5 + rho * 0.5, rho)
        f = lambda x: np.exp(s * x) * rep.real_eval(x)
        scale = max(abs(rep.real_eval(-1.0)), abs(rep.real_eval(-5.0)), 1e-6)
        return integrate_halfline(f, "left", (50.0 * scale, decay))
    return float(np.real(rep.halfline_transform(s)))


def speed_index_slope(kernel: Kernel, c0: float, mu: float) -> float:
    """Exact ``phi'(mu)`` through the depth-0 transform."""
    _check_mu(c0, mu)
    return repeated_integral_transform(kernel, c0, 0, mu) / mu**2


def speed_index_profile(kernel: Kernel, c0: float, n_points: int) -> list[tuple[float, float]]:
    """Sample ``phi`` on an open grid of ``(0, c0)``.

    For infinite transmission speed the grid is mapped through
    ``mu = t/(1-t)`` so both endpoints are approached.
    """
    if n_points < 2:
        raise ValueError("need at least two profile points")
    t = np.arange(1, n_points + 1) / (n_points + 1)
    mus = t / (1.0 - t) if math.isinf(c0) else c0 * t
    phis = speed_index(kernel, c0, mus)
    return list(zip(map(float, mus), map(float, phis)))


@dataclass(frozen=True)
class WaveSpeedResult:
    """The unique compatibility root with its uniqueness certificate."""

    mu0: float
    residual: float
    certificate: str
    phi_samples: tuple[tuple[float, float], ...]


_CERTIFICATES = {
    "A": "strictly_increasing",
    "B": "single_max_above_half",
    "C": "single_min_below_zero",
}


def solve_wave_speed(
    kernel: Kernel,
    params: ModelParams,
    condition: WaveSpeedConditionReport,
    tol: float = 1e-12,
    scan_points: int = 10_000,
) -> WaveSpeedResult:
    """Solve ``phi(mu) = 1/2 - theta/alpha`` on ``(0, c0)``.

    The bracket is guaranteed by the endpoint limits ``phi -> 0`` and
    ``phi -> 1/2``; the returned certificate reflects the wave-speed sign
    condition.  A dense scan of the profile must find exactly one root, and
    :class:`MultipleRoots` flags an upstream misclassification otherwise.
    """
    c0 = params.c0
    level = params.level

    # march the lower endpoint down until phi is safely under the level
    hi = c0 * (1.0 - 1e-6) if not math.isinf(c0) else 1e6
    lo = hi / 2.0
    f = lambda mu: float(speed_index(kernel, c0, mu)) - level
    f_hi = f(hi)
    for _ in range(200):
        if f(lo) < -level * 0.9:
            break
        lo /= 2.0
    else:
        raise NoRoot("could not find a lower bracket endpoint with phi below level/10")
    if f_hi <= 0:
        raise NoRoot("phi does not exceed the compatibility level near c0")

    mu0 = find_root_bracketed(f, Bracket(lo, hi, f(lo), f_hi), tol=tol)
    residual = abs(f(mu0))

    # dense uniqueness scan over the full admissible range
    t = np.arange(1, scan_points + 1) / (scan_points + 1)
    mus = t / (1.0 - t) if math.isinf(c0) else c0 * t
    vals = speed_index(kernel, c0, mus) - level
    signs = np.sign(vals)
    nz = signs[signs != 0]
    flips = int(np.sum(nz[1:] != nz[:-1]))
    if flips > 1:
        raise MultipleRoots(
            f"dense scan found {flips} compatibility roots; classification is inconsistent"
        )

    certificate = _CERTIFICATES.get(condition.kind, "numerical_only")
    if condition.kind == "B":
        # the single-max certificate needs the repeated integral to stay
        # negative in the far field; otherwise report the numerical verdict
        rep = repeated_integral_rep(kernel, condition.order)
        poly = rep.polynomial_part()
        if poly.size == 0 or np.max(np.abs(poly)) < 1e-14:
            certificate = "numerical_only"
    samples = tuple((float(m), float(v + level)) for m, v in zip(mus[:: max(1, scan_points // 200)], vals[:: max(1, scan_points // 200)]))
    return WaveSpeedResult(float(mu0), float(residual), certificate, samples)
