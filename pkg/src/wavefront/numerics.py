"""Shared numerical machinery.

Half-line quadrature with envelope-controlled truncation, safeguarded
bracketed root finding, a damped two-dimensional Newton solve, and sign-change
scanning.  All operations are pure functions of their inputs and safe to call
concurrently.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidEnvelope,
    MaxIterations,
    NonConvergence,
    NoSignChange,
    SingularJacobian,
)

# 15-point Kronrod nodes on [-1, 1] with the embedded 7-point Gauss rule.
_KRONROD_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_KRONROD_WEIGHTS = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_GAUSS_WEIGHTS = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)


@dataclass(frozen=True)
class QuadratureSettings:
    """Error targets and budget for the adaptive half-line quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    tail_cut: float = 0.1
    max_subdivisions: int = 4000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0 or self.tail_cut <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass
class Bracket:
    """A sign-change interval ``[lo, hi]`` with the function values at its ends."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket endpoints must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise NoSignChange(
                f"no sign change on [{self.lo}, {self.hi}]: f={self.f_lo}, {self.f_hi}"
            )

    @classmethod
    def from_function(cls, g, lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, g(lo), g(hi))


class _BatchCaller:
    """Call ``f`` on arrays when it supports that, falling back to a scalar loop."""

    def __init__(self, f):
        self.f = f
        self.vectorized: bool | None = None

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        if self.vectorized is None:
            try:
                out = np.asarray(self.f(xs))
                self.vectorized = out.shape == xs.shape
                if self.vectorized:
                    return out
            except Exception:
                self.vectorized = False
        if self.vectorized:
            return np.asarray(self.f(xs))
        return np.asarray([self.f(float(x)) for x in xs])


def _kronrod_panel(caller: _BatchCaller, a: float, b: float):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = caller(mid + half * _KRONROD_NODES)
    kron = half * np.sum(_KRONROD_WEIGHTS * vals)
    gauss = half * np.sum(_GAUSS_WEIGHTS * vals[1::2])
    # |K15 - G7| overestimates the K15 error, which is the safe direction
    return kron, abs(kron - gauss)


def integrate_halfline(f, side: str, envelope: tuple[float, float], settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Integrate ``f`` over ``(-inf, 0]`` or ``[0, inf)``.

    Parameters
    ----------
    f : callable
        Real- or complex-valued integrand; may accept numpy arrays.
    side : {"left", "right"}
        Which half-line to integrate over.
    envelope : (C, rho)
        Decay bound ``|f(x)| <= C * exp(-rho*|x|)`` away from the origin,
        used to pick the truncation point: the discarded tail is below
        ``tail_cut * abs_tol``.
    settings : QuadratureSettings
        Error targets and panel budget.

    Returns
    -------
    float or complex
        The integral, with estimated error below
        ``max(abs_tol, rel_tol * |result|)``.

    Raises
    ------
    InvalidEnvelope
        If the envelope decay rate is not positive.
    NonConvergence
        If the panel budget is exhausted before meeting the target.
    """
    big_c, rho = envelope
    if rho <= 0 or big_c <= 0:
        raise InvalidEnvelope(f"envelope must have positive C and rho, got ({big_c}, {rho})")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    cut = max(big_c / rho / (settings.tail_cut * settings.abs_tol), 2.0)
    trunc = max(math.log(cut) / rho, 1.0)
    caller = _BatchCaller(f)

    # dyadic initial panels cluster near the origin where mass concentrates
    edges = [0.0]
    w = min(1.0, trunc / 8.0)
    while edges[-1] + w < trunc:
        edges.append(edges[-1] + w)
        w *= 2.0
    edges.append(trunc)
    if side == "left":
        edges = [-e for e in edges]

    heap: list[tuple[float, int, float, float, complex]] = []
    total = 0.0 + 0.0j
    total_err = 0.0
    counter = 0
    for a, b in zip(edges[:-1], edges[1:]):
        lo, hi = (a, b) if a < b else (b, a)
        val, err = _kronrod_panel(caller, lo, hi)
        total += val
        total_err += err
        heapq.heappush(heap, (-err, counter, lo, hi, val))
        counter += 1

    used = len(heap)
    while total_err > max(settings.abs_tol, settings.rel_tol * abs(total)):
        if used >= settings.max_subdivisions or not heap:
            raise NonConvergence(
                f"quadrature used {used} panels without reaching tolerance "
                f"(error {total_err:.3e})"
            )
        neg_err, _, lo, hi, val = heapq.heappop(heap)
        total -= val
        total_err += neg_err  # neg_err is -err
        mid = 0.5 * (lo + hi)
        for a, b in ((lo, mid), (mid, hi)):
            v, e = _kronrod_panel(caller, a, b)
            total += v
            total_err += e
            heapq.heappush(heap, (-e, counter, a, b, v))
            counter += 1
        used += 1

    if abs(total.imag) == 0.0:
        return total.real
    return complex(total)


def integrate_interval(f, a: float, b: float, settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Adaptive integral of ``f`` over the finite interval ``[a, b]``.

    Same panel engine and error targets as :func:`integrate_halfline`; used
    for the bounded pieces of the piecewise-defined profile integrals.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    caller = _BatchCaller(f)
    n0 = min(8, max(1, settings.max_subdivisions))
    edges = np.linspace(a, b, n0 + 1)
    heap: list[tuple[float, int, float, float, complex]] = []
    total = 0.0 + 0.0j
    total_err = 0.0
    counter = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _kronrod_panel(caller, lo, hi)
        total += val
        total_err += err
        heapq.heappush(heap, (-err, counter, lo, hi, val))
        counter += 1
    used = len(heap)
    while total_err > max(settings.abs_tol, settings.rel_tol * abs(total)):
        if used >= settings.max_subdivisions or not heap:
            raise NonConvergence(
                f"interval quadrature used {used} panels without reaching tolerance "
                f"(error {total_err:.3e})"
            )
        neg_err, _, lo, hi, val = heapq.heappop(heap)
        total -= val
        total_err += neg_err
        mid = 0.5 * (lo + hi)
        for aa, bb in ((lo, mid), (mid, hi)):
            v, e = _kronrod_panel(caller, aa, bb)
            total += v
            total_err += e
            heapq.heappush(heap, (-e, counter, aa, bb, v))
            counter += 1
        used += 1
    if abs(total.imag) == 0.0:
        return sign * total.real
    return sign * complex(total)


def find_root_bracketed(g, bracket: Bracket, tol: float = 1e-10, max_iter: int = 200) -> float:
    """Safeguarded Brent iteration inside a sign-change bracket.

    Converges when the interval width falls below ``tol`` (plus machine
    rounding on the iterate) or an exact zero is hit.  The result always lies
    inside the initial bracket.
    """
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise NoSignChange(f"no sign change on [{a}, {b}]")

    eps = np.finfo(float).eps
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        halftol = 2.0 * eps * abs(b) + 0.5 * tol
        m = 0.5 * (c - b)
        if abs(m) <= halftol or fb == 0.0:
            return b
        if abs(e) < halftol or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            s, e = e, d
            if 2.0 * p < 3.0 * m * q - abs(halftol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                d = e = m
        a, fa = b, fb
        b += d if abs(d) > halftol else (halftol if m > 0 else -halftol)
        fb = g(b)
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
    raise MaxIterations(f"root not isolated to {tol} in {max_iter} iterations")


def solve_2d(F, x0, tol: float = 1e-8, max_iter: int = 100) -> np.ndarray:
    """Damped Newton iteration for a two-dimensional system.

    The Jacobian comes from central differences with step
    ``max(1e-6, 1e-6*|x_i|)`` per coordinate; the step is halved while the
    residual max-norm fails to decrease.

    Returns the iterate once ``max|F| <= tol``.
    """
    x = np.array(x0, dtype=float)
    if x.shape != (2,):
        raise ValueError("solve_2d expects a 2-vector start")
    fx = np.asarray(F(x), dtype=float)
    for _ in range(max_iter):
        res = np.max(np.abs(fx))
        if res <= tol:
            return x
        jac = np.empty((2, 2))
        for i in range(2):
            h = max(1e-6, 1e-6 * abs(x[i]))
            xp = x.copy()
            xm = x.copy()
            xp[i] += h
            xm[i] -= h
            jac[:, i] = (np.asarray(F(xp)) - np.asarray(F(xm))) / (2.0 * h)
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        scale = np.max(np.abs(jac))
        if not np.isfinite(det) or scale == 0.0 or abs(det) < 1e-14 * scale * scale:
            raise SingularJacobian(f"Jacobian determinant {det:.3e} too small")
        step = np.linalg.solve(jac, -fx)
        lam = 1.0
        for _ in range(30):
            trial = x + lam * step
            ftrial = np.asarray(F(trial), dtype=float)
            if np.all(np.isfinite(ftrial)) and np.max(np.abs(ftrial)) < res:
                x, fx = trial, ftrial
                break
            lam *= 0.5
        else:
            raise NonConvergence(f"damping failed to reduce residual {res:.3e}")
    if np.max(np.abs(fx)) <= tol:
        return x
    raise MaxIterations(f"2-D solve stalled at residual {np.max(np.abs(fx)):.3e}")


def scan_sign_changes(g, grid) -> list[Bracket]:
    """Every consecutive grid pair where ``g`` changes sign, in order.

    Exact zeros at grid points are attached to the preceding sign, so a
    transversal crossing through a grid point is still reported once and a
    tangential touch is not reported at all.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least two points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    vals = _BatchCaller(g)(grid)
    signs = np.sign(vals)
    carried = signs.copy()
    for i in range(1, carried.size):
        if carried[i] == 0:
            carried[i] = carried[i - 1]
    out = []
    for i in range(carried.size - 1):
        if carried[i] != 0 and carried[i + 1] != 0 and carried[i] != carried[i + 1]:
            out.append(Bracket(float(grid[i]), float(grid[i + 1]), float(vals[i]), float(vals[i + 1])))
    return out
