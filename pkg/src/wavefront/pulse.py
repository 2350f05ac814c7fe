"""Fast traveling pulses of the two-component system with slow linear feedback.

Adding a slow leak current to the scalar model turns fronts into pulses: an
active interval of width ``Z`` bounded by an upcrossing at 0 and a
downcrossing at ``Z``, both pinned to the threshold.  The profile is a
closed-form combination of exponentially weighted history integrals of the
kernel whose rates are the eigenvalues of the linear part; the two threshold
conditions form a 2-D compatibility system solved by damped Newton from a
singular-orbit seed, and the scan multistarts to separate the fast branch
from the slow one.  Transmission delay is switched off here (instantaneous
axons), matching the regime where the pulse construction applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplexEigenvalues, NoBackLevel, NonConvergence, SlowBranchOnly
from .errors import MaxIterations, NumericsError, SingularJacobian
from .kernels import Kernel, wave_speed_condition
from .numerics import DEFAULT_SETTINGS, QuadratureSettings, integrate_halfline, solve_2d
from .wavespeed import ModelParams, solve_wave_speed


@dataclass(frozen=True)
class PulseParams:
    """Model parameters for the feedback system.

    The window ``0 < 2*theta < alpha < (1+gamma)*theta/gamma`` is where a
    front exists and the rest state is the only subthreshold equilibrium;
    the perturbation parameter must keep the linear eigenvalues real.
    """

    alpha: float
    theta: float
    gamma: float
    epsilon: float

    def __post_init__(self):
        if not 0 < 2 * self.theta < self.alpha:
            raise ValueError("need 0 < 2*theta < alpha")
        if not self.gamma > 0:
            raise ValueError("feedback decay gamma must be positive")
        if not self.alpha < (1 + self.gamma) * self.theta / self.gamma:
            raise ValueError("need alpha < (1+gamma)*theta/gamma for a pulse regime")
        if not 0 < self.epsilon:
            raise ValueError("perturbation epsilon must be positive")
        if (1 - self.gamma * self.epsilon) ** 2 - 4 * self.epsilon <= 0:
            raise ComplexEigenvalues(
                f"(1-gamma*eps)^2 - 4*eps <= 0 at eps={self.epsilon}, gamma={self.gamma}"
            )

    @property
    def front_params(self) -> ModelParams:
        return ModelParams(self.alpha, self.theta, math.inf)


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalues of the linear part, ``omega1 > omega2 > 0``."""

    omega1: float
    omega2: float


def feedback_eigenvalues(epsilon: float, gamma: float) -> EigenPair:
    """Closed-form eigenvalue pair of the feedback coefficient matrix.

    Computed in cancellation-free form, so the small eigenvalue is accurate
    to full precision: the pair satisfies ``sum = 1 + gamma*eps`` and
    ``product = eps*(1+gamma)`` exactly.
    """
    if epsilon <= 0 or gamma <= 0:
        raise ValueError("epsilon and gamma must be positive")
    disc = (1.0 - gamma * epsilon) ** 2 - 4.0 * epsilon
    if disc < 0:
        raise ComplexEigenvalues(f"discriminant {disc} < 0")
    root = math.sqrt(disc)
    omega1 = 0.5 * (1.0 + gamma * epsilon + root)
    omega2 = 2.0 * epsilon * (1.0 + gamma) / (1.0 + gamma * epsilon + root)
    return EigenPair(omega1, omega2)


def _profile_weights(params: PulseParams, mu: float):
    """History-integral rates and weights for the two profile components."""
    pair = feedback_eigenvalues(params.epsilon, params.gamma)
    w1, w2 = pair.omega1, pair.omega2
    gap = w1 - w2
    # 1 - omega1 = 2*eps / (1 - gamma*eps + sqrt(disc)), free of cancellation
    disc_root = math.sqrt((1.0 - params.gamma * params.epsilon) ** 2 - 4.0 * params.epsilon)
    one_minus_w1 = 2.0 * params.epsilon / (1.0 - params.gamma * params.epsilon + disc_root)
    u_weights = ((1.0 - w2) / (w1 * gap), -one_minus_w1 / (w2 * gap))
    w_weights = (-1.0 / (w1 * gap), 1.0 / (w2 * gap))
    rates = (w1 / mu, w2 / mu)
    return rates, u_weights, w_weights


def pulse_value(
    kernel: Kernel,
    params: PulseParams,
    mu: float,
    width: float,
    z,
    method: str = "closed",
    settings: QuadratureSettings = DEFAULT_SETTINGS,
):
    """Both pulse components ``(U, W)`` at ``z``; vectorized for the closed form.

    The active-interval drive is the kernel mass on ``[z - width, z]``; the
    memory terms are history integrals at the two eigenvalue rates, with the
    width-shifted copies subtracted.
    """
    if mu <= 0 or width <= 0:
        raise ValueError("pulse speed and width must be positive")
    alpha, gamma, eps = params.alpha, params.gamma, params.epsilon
    if method == "quadrature":
        return _pulse_value_quadrature(kernel, params, mu, width, float(z), settings)
    rates, u_w, w_w = _profile_weights(params, mu)
    drive = kernel.cdf(z) - kernel.cdf(np.asarray(z, dtype=float) - width)
    hist = [
        kernel.weighted_history(r, z) - kernel.weighted_history(r, np.asarray(z, dtype=float) - width)
        for r in rates
    ]
    u = alpha * gamma / (1.0 + gamma) * drive - alpha * (u_w[0] * hist[0] + u_w[1] * hist[1])
    w = alpha / (1.0 + gamma) * drive - eps * alpha * (w_w[0] * hist[0] + w_w[1] * hist[1])
    if np.asarray(u).shape:
        return u, w
    return float(u), float(w)


def _pulse_value_quadrature(kernel, params, mu, width, z, settings):
    alpha, gamma, eps = params.alpha, params.gamma, params.epsilon
    rates, u_w, w_w = _profile_weights(params, mu)
    big_c, rho = kernel.envelope

    def hist_quad(rate):
        # substitute u = x - z; the integrand decays at rate + rho jointly
        f = lambda u: np.exp(rate * u) * (kernel.eval(u + z) - kernel.eval(u + z - width))
        env_c = 2.0 * big_c * math.exp(rho * min(abs(z) + width, 700.0 / rho))
        return integrate_halfline(f, "left", (env_c, rate + rho), settings)

    drive_hi = _cdf_quad(kernel, z, settings)
    drive_lo = _cdf_quad(kernel, z - width, settings)
    drive = drive_hi - drive_lo
    h = [hist_quad(r) for r in rates]
    u = alpha * gamma / (1.0 + gamma) * drive - alpha * (u_w[0] * h[0] + u_w[1] * h[1])
    w = alpha / (1.0 + gamma) * drive - eps * alpha * (w_w[0] * h[0] + w_w[1] * h[1])
    return float(u), float(w)


def _cdf_quad(kernel, w, settings):
    from .numerics import integrate_interval

    big_c, rho = kernel.envelope
    if w <= 0:
        return integrate_halfline(lambda u: kernel.eval(u + w), "left", (big_c, rho), settings)
    return integrate_halfline(kernel.eval, "left", (big_c, rho), settings) + integrate_interval(
        kernel.eval, 0.0, w, settings
    )


@dataclass(frozen=True)
class PulseSolution:
    """A converged fast pulse: speed, active width, and solve residual."""

    kernel: Kernel
    params: PulseParams
    mu: float
    width: float
    residual: float


def singular_width_estimate(params: PulseParams, front_speed: float) -> float:
    """Active width predicted by the slow flow along the excited branch.

    The feedback variable relaxes toward ``alpha/(1+gamma)`` at rate
    ``(1+gamma)*eps/mu`` and must reach the jump-down level ``alpha-2*theta``
    over the width.
    """
    alpha, theta, gamma, eps = params.alpha, params.theta, params.gamma, params.epsilon
    target = 2.0 * theta * (1.0 + gamma) - alpha * gamma
    if target <= 0:
        raise NoBackLevel("slow flow cannot reach the jump-down level in this regime")
    return front_speed / ((1.0 + gamma) * eps) * math.log(alpha / target)


def solve_pulse(
    kernel: Kernel,
    params: PulseParams,
    front_speed: float,
    tol: float = 1e-10,
) -> PulseSolution:
    """Solve the two threshold conditions for the fast ``(speed, width)`` pair.

    Newton runs from the singular-orbit seed first and then from a spread of
    widths; among converged roots the one with the largest speed is the fast
    branch.  :class:`SlowBranchOnly` signals that every root travels far
    below the front speed, :class:`NonConvergence` that no start converged.
    """
    alpha, theta = params.alpha, params.theta

    def system(v):
        mu, width = float(v[0]), float(v[1])
        if mu <= 0 or width <= 0 or mu > 100 * max(front_speed, 1.0):
            return np.array([1e6, 1e6])
        u0, _ = pulse_value(kernel, params, mu, width, 0.0)
        u1, _ = pulse_value(kernel, params, mu, width, width)
        return np.array([u0 - theta, u1 - theta])

    rho = kernel.envelope[1]
    starts = [(front_speed, singular_width_estimate(params, front_speed))]
    starts += [(front_speed, s / rho) for s in (5.0, 10.0, 20.0, 40.0)]
    roots: list[tuple[float, float]] = []
    for x0 in starts:
        try:
            sol = solve_2d(system, np.array(x0), tol=tol, max_iter=200)
        except (NonConvergence, MaxIterations, SingularJacobian):
            continue
        mu, width = float(sol[0]), float(sol[1])
        if mu <= 0 or width <= 0:
            continue
        if not any(
            abs(mu - m) < 1e-6 * (1 + abs(m)) and abs(width - w) < 1e-6 * (1 + abs(w))
            for m, w in roots
        ):
            roots.append((mu, width))

    if not roots:
        raise NonConvergence("no pulse compatibility root converged from any start")
    mu, width = max(roots, key=lambda r: r[0])
    if mu < 0.5 * front_speed:
        raise SlowBranchOnly(
            f"all converged speeds {sorted(r[0] for r in roots)} sit far below the front speed {front_speed}"
        )
    residual = float(np.max(np.abs(system(np.array([mu, width])))))
    return PulseSolution(kernel, params, mu, width, residual)


@dataclass(frozen=True)
class PhasePortrait:
    """Sampled pulse orbit in the ``(U, W)`` plane with optional overlay."""

    samples: tuple[tuple[float, float, float], ...]
    singular_overlay: tuple[tuple[float, float], ...] | None


def portrait_proximity(portrait: PhasePortrait) -> float:
    """Largest distance from any portrait point to the singular polyline.

    The overlay is treated as a piecewise-linear curve, so the measure is
    insensitive to how densely either curve was sampled.  The skeleton's
    sharp corners are rounded by any positive perturbation, which is why the
    comparison runs from the portrait to the skeleton and not symmetrically.
    """
    if portrait.singular_overlay is None:
        raise ValueError("portrait carries no singular overlay")
    pts = np.array([(u, w) for _, u, w in portrait.samples])
    poly = np.array(portrait.singular_overlay)
    seg_a = poly[:-1]
    seg_d = poly[1:] - poly[:-1]
    seg_len2 = np.maximum((seg_d**2).sum(axis=1), 1e-300)
    worst = 0.0
    for i in range(0, len(pts), 256):
        chunk = pts[i : i + 256]
        rel = chunk[:, None, :] - seg_a[None, :, :]
        t = np.clip((rel * seg_d[None, :, :]).sum(-1) / seg_len2[None, :], 0.0, 1.0)
        closest = seg_a[None, :, :] + t[:, :, None] * seg_d[None, :, :]
        dist = np.sqrt(((chunk[:, None, :] - closest) ** 2).sum(-1)).min(axis=1)
        worst = max(worst, float(dist.max()))
    return worst


def singular_orbit(
    kernel: Kernel,
    alpha: float,
    theta: float,
    gamma: float,
    n_per_segment: int = 400,
) -> list[tuple[float, float]]:
    """The limiting orbit skeleton: front, excited slow arc, back, resting arc.

    The jump-down feedback level is the one equalizing back and front speeds,
    which the threshold algebra fixes at ``alpha - 2*theta``; the back
    profile is then the reflected front.  Slow segments follow the two
    quasi-equilibrium branches ``u = alpha - w`` and ``u = -w``.
    """
    from .front import FrontSolution, front_value

    front_params = ModelParams(alpha, theta, math.inf)
    cond = wave_speed_condition(kernel)
    speed = solve_wave_speed(kernel, front_params, cond)
    front = FrontSolution(kernel, front_params, speed.mu0)

    w_jump = alpha - 2.0 * theta
    if not 0 < w_jump < alpha / (1.0 + gamma):
        raise NoBackLevel(
            f"jump-down level {w_jump} is outside the reachable feedback range"
        )

    z_win = 40.0 / kernel.envelope[1]
    zs = np.linspace(-z_win, z_win, n_per_segment)
    u_front = np.atleast_1d(front_value(front, zs))
    pts: list[tuple[float, float]] = [(float(u), 0.0) for u in u_front]
    w_up = np.linspace(0.0, w_jump, n_per_segment)
    pts += [(float(alpha - w), float(w)) for w in w_up]
    pts += [(float(2.0 * theta - u), w_jump) for u in u_front]
    w_down = np.linspace(w_jump, 0.0, n_per_segment)
    pts += [(float(-w), float(w)) for w in w_down]
    return pts


def phase_portrait(
    solution: PulseSolution,
    z_window: float | None = None,
    n: int = 2000,
) -> PhasePortrait:
    """Sample the pulse orbit densely over the loop, overlaying the skeleton.

    The grid covers the approach, the active interval, and enough of the slow
    recovery that the orbit returns to the rest state; roughly a third of the
    points are spent on the recovery tail.
    """
    kernel, params = solution.kernel, solution.params
    if z_window is None:
        z_window = 40.0 / kernel.envelope[1]
    recovery = solution.mu / (params.epsilon * (1.0 + params.gamma))
    z_tail = solution.width + max(z_window, 10.0 * recovery)
    n_fast = max(2, (2 * n) // 3)
    n_slow = max(2, n - n_fast)
    z_fast = np.linspace(-z_window, solution.width + z_window, n_fast)
    z_slow = np.linspace(solution.width + z_window, z_tail, n_slow + 1)[1:]
    zs = np.concatenate([z_fast, z_slow])
    u, w = pulse_value(kernel, params, solution.mu, solution.width, zs)
    samples = tuple(zip(map(float, zs), map(float, np.atleast_1d(u)), map(float, np.atleast_1d(w))))
    overlay = tuple(singular_orbit(kernel, params.alpha, params.theta, params.gamma))
    return PhasePortrait(samples, overlay)
