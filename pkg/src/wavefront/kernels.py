"""Coupling kernels: construction, normalization, zero structure, and class verdicts.

A kernel is a parametric coupling function ``K`` with exponential decay and
half-line integrals both equal to 1/2.  This module locates its transversal
axis crossings, evaluates the repeated integral of ``|x| K(x)`` on the left
half-line, checks the wave-speed sign conditions and the threshold
inequalities at the crossings, and combines those verdicts into a class
report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .closedform import ExpPolySum
from .errors import DegenerateKernel, MarginViolation, TangentialZero
from .numerics import (
    DEFAULT_SETTINGS,
    Bracket,
    QuadratureSettings,
    find_root_bracketed,
    integrate_halfline,
    scan_sign_changes,
)

FORMS = (
    "exponential",
    "exp_cos_plus",
    "exp_sin_cos",
    "exp_const_minus_cos",
    "exp_trig",
    "exp_linear",
)

_FORM_PARAMS = {
    "exponential": ("rho",),
    "exp_cos_plus": ("a", "b", "c"),
    "exp_sin_cos": ("a",),
    "exp_const_minus_cos": ("a", "b", "c"),
    "exp_trig": ("a", "b", "c", "d", "e", "f"),
    "exp_linear": ("a", "b", "c"),
}

# built-in aliases used throughout the examples and the CLI
BUILTIN_ALIASES = {
    "k1": ("exp_cos_plus", {"a": 0.2, "b": 2.0, "c": 0.4}),
    "k2": ("exp_sin_cos", {"a": 0.3}),
    "k3": ("exp_const_minus_cos", {"a": 0.2, "b": 2.0, "c": 0.4}),
    "exp": ("exponential", {"rho": 1.0}),
}


@dataclass(frozen=True)
class KernelSpec:
    """Unnormalized parametric form of a coupling function."""

    form: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.form not in _FORM_PARAMS:
            raise ValueError(f"unknown kernel form {self.form!r}; choose from {FORMS}")
        expected = _FORM_PARAMS[self.form]
        if set(self.params) != set(expected):
            raise ValueError(
                f"form {self.form!r} needs parameters {expected}, got {tuple(self.params)}"
            )
        for name, value in self.params.items():
            if not math.isfinite(value):
                raise ValueError(f"parameter {name}={value} is not finite")
        if self.decay_rate() <= 0:
            raise ValueError("decay parameter must be positive")

    def decay_rate(self) -> float:
        return self.params["rho"] if self.form == "exponential" else self.params["a"]

    @classmethod
    def from_alias(cls, name: str) -> "KernelSpec":
        form, params = BUILTIN_ALIASES[name]
        return cls(form, dict(params))

    def to_json(self) -> str:
        return json.dumps({"form": self.form, "params": self.params}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "KernelSpec":
        obj = json.loads(text)
        return cls(obj["form"], {k: float(v) for k, v in obj["params"].items()})


def _unit_amplitude_reps(spec: KernelSpec) -> tuple[ExpPolySum, ExpPolySum]:
    """Left (x<=0) and right (x>=0) representations with amplitude 1."""
    p = spec.params
    if spec.form == "exponential":
        rho = p["rho"]
        return ExpPolySum.exponential(1.0, rho), ExpPolySum.exponential(1.0, -rho)
    if spec.form == "exp_cos_plus":
        a, b, c = p["a"], p["b"], p["c"]
        left = ExpPolySum.exp_cos(1.0, a, b) + ExpPolySum.exponential(c, a)
        right = ExpPolySum.exp_cos(1.0, -a, b) + ExpPolySum.exponential(c, -a)
        return left, right
    if spec.form == "exp_sin_cos":
        a = p["a"]
        # sin|x| flips sign across the origin
        left = ExpPolySum.exp_sin(-a, a, 1.0) + ExpPolySum.exp_cos(1.0, a, 1.0)
        right = ExpPolySum.exp_sin(a, -a, 1.0) + ExpPolySum.exp_cos(1.0, -a, 1.0)
        return left, right
    if spec.form == "exp_const_minus_cos":
        a, b, c = p["a"], p["b"], p["c"]
        left = ExpPolySum.exponential(c, a) + ExpPolySum.exp_cos(-1.0, a, b)
        right = ExpPolySum.exponential(c, -a) + ExpPolySum.exp_cos(-1.0, -a, b)
        return left, right
    if spec.form == "exp_trig":
        a, b, c, d, e, f = (p[k] for k in ("a", "b", "c", "d", "e", "f"))
        left = ExpPolySum.exp_cos(b, a, c, d) + ExpPolySum.exp_sin(e, a, c, f)
        right = ExpPolySum.exp_cos(b, -a, c, d) + ExpPolySum.exp_sin(e, -a, c, f)
        return left, right
    # exp_linear: e^{-a|x|} (-b|x| + c), so -b|x| = +b*x on the left
    a, b, c = p["a"], p["b"], p["c"]
    left = ExpPolySum.exponential(b, a).times_x() + ExpPolySum.exponential(c, a)
    right = ExpPolySum.exponential(-b, -a).times_x() + ExpPolySum.exponential(c, -a)
    return left, right


def _envelope(spec: KernelSpec, amplitude: float) -> tuple[float, float]:
    p = spec.params
    mag = abs(amplitude)
    if spec.form == "exponential":
        return mag, p["rho"]
    if spec.form == "exp_cos_plus":
        return mag * (1.0 + abs(p["c"])), p["a"]
    if spec.form == "exp_sin_cos":
        return mag * (abs(p["a"]) + 1.0), p["a"]
    if spec.form == "exp_const_minus_cos":
        return mag * (abs(p["c"]) + 1.0), p["a"]
    if spec.form == "exp_trig":
        return mag * (abs(p["b"]) + abs(p["e"])), p["a"]
    # the |x| factor in exp_linear is absorbed by halving the certified rate
    a, b, c = p["a"], p["b"], p["c"]
    return mag * (abs(c) + 2.0 * b / (math.e * a)), a / 2.0


@dataclass(frozen=True)
class Kernel:
    """A normalized coupling function with closed-form half-line representations."""

    spec: KernelSpec
    amplitude: float
    envelope: tuple[float, float]
    symmetric: bool
    left_rep: ExpPolySum = field(repr=False, compare=False)
    right_rep: ExpPolySum = field(repr=False, compare=False)
    _rep_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Pointwise closed-form evaluation; accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        p = self.spec.params
        A = self.amplitude
        ax = np.abs(x)
        form = self.spec.form
        if form == "exponential":
            out = A * np.exp(-p["rho"] * ax)
        elif form == "exp_cos_plus":
            out = A * np.exp(-p["a"] * ax) * (np.cos(p["b"] * x) + p["c"])
        elif form == "exp_sin_cos":
            out = A * np.exp(-p["a"] * ax) * (p["a"] * np.sin(ax) + np.cos(x))
        elif form == "exp_const_minus_cos":
            out = A * np.exp(-p["a"] * ax) * (p["c"] - np.cos(p["b"] * x))
        elif form == "exp_trig":
            out = A * np.exp(-p["a"] * ax) * (
                p["b"] * np.cos(p["c"] * x + p["d"]) + p["e"] * np.sin(p["c"] * x + p["f"])
            )
        else:
            out = A * np.exp(-p["a"] * ax) * (-p["b"] * ax + p["c"])
        return out if out.shape else float(out)

    def cdf(self, w):
        """``integral_{-inf}^{w} K``; exact, vectorized."""
        w = np.asarray(w, dtype=float)
        scalar = not w.shape
        w = np.atleast_1d(w)
        out = np.empty(w.shape)
        neg = w <= 0.0
        if np.any(neg):
            out[neg] = np.real(self.left_rep.tail_integral(0.0, w[neg]))
        if np.any(~neg):
            out[~neg] = 0.5 + np.real(self.right_rep.anchored_partial_integral(0.0, w[~neg]))
        return float(out[0]) if scalar else out

    def default_window(self, floor: float = 1e-12) -> float:
        """Radius beyond which the decay envelope drops under ``floor``."""
        big_c, rho = self.envelope
        return max(math.log(max(big_c / floor, 10.0)) / rho, 10.0)

    def weighted_history(self, s: float, z):
        """``integral_{-inf}^{z} exp(s*(x-z)) K(x) dx`` for ``s > 0`` (vectorized).

        The anchored form keeps every exponent non-positive, so this stays
        finite for arbitrarily large ``|z|``.
        """
        z = np.asarray(z, dtype=float)
        scalar = not z.shape
        z = np.atleast_1d(z)
        out = np.empty(z.shape)
        neg = z <= 0.0
        if np.any(neg):
            out[neg] = np.real(self.left_rep.tail_integral(s, z[neg]))
        if np.any(~neg):
            zp = z[~neg]
            left_full = np.real(self.left_rep.tail_integral(s, 0.0))
            out[~neg] = np.exp(-s * zp) * left_full + np.real(
                self.right_rep.anchored_partial_integral(s, zp)
            )
        return float(out[0]) if scalar else out


def normalize(spec: KernelSpec, settings: QuadratureSettings = DEFAULT_SETTINGS) -> Kernel:
    """Build the normalized kernel for a spec.

    The amplitude is chosen so each half-line integral equals 1/2; the decay
    envelope comes from the closed form.  Raises :class:`DegenerateKernel`
    when the unnormalized half-line integral is too close to zero for the
    amplitude to be meaningful.
    """
    left, right = _unit_amplitude_reps(spec)
    half = float(np.real(left.tail_integral(0.0, 0.0)))
    scale = sum(abs(t.coef) for t in left.terms) / max(spec.decay_rate(), 1e-6)
    if abs(half) < 1e-12 * max(scale, 1.0):
        raise DegenerateKernel(
            f"half-line integral {half:.3e} vanishes; cannot normalize {spec.form}"
        )
    amplitude = 0.5 / half
    return Kernel(
        spec=spec,
        amplitude=amplitude,
        envelope=_envelope(spec, amplitude),
        symmetric=_is_symmetric(spec),
        left_rep=left.scale(amplitude),
        right_rep=right.scale(amplitude),
    )


def _is_symmetric(spec: KernelSpec) -> bool:
    if spec.form != "exp_trig":
        return True
    # symmetric iff the trig combination is an even function
    p = spec.params
    xs = np.array([0.3, 0.7, 1.7, 2.9, 4.2])
    f = lambda x: p["b"] * np.cos(p["c"] * x + p["d"]) + p["e"] * np.sin(p["c"] * x + p["f"])
    return bool(np.max(np.abs(f(xs) - f(-xs))) < 1e-12 * (abs(p["b"]) + abs(p["e"]) + 1e-30))


# ---------------------------------------------------------------------------
# zero structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroStructure:
    """Transversal axis crossings of a kernel, one list per half-line.

    Locations are the positive distances from the origin; a left entry
    ``(m, s)`` means a crossing at ``x = -m`` where the kernel's derivative
    has sign ``s``.  ``truncated`` is set when the oscillation pattern
    continues beyond the enumeration window.
    """

    left_crossings: tuple[tuple[float, int], ...]
    right_crossings: tuple[tuple[float, int], ...]
    truncated: bool
    window: float


def _trig_frequency(spec: KernelSpec) -> float:
    if spec.form in ("exp_cos_plus", "exp_const_minus_cos"):
        return abs(spec.params["b"])
    if spec.form == "exp_sin_cos":
        return 1.0
    if spec.form == "exp_trig":
        return abs(spec.params["c"])
    return 0.0


def zero_structure(kernel: Kernel, window: float | None = None, grid_density: float | None = None) -> ZeroStructure:
    """Locate all transversal crossings with ``|x| <= window``.

    The default window is where the decay envelope falls below 1e-12, and the
    default grid density resolves the oscillation period.  Raises
    :class:`TangentialZero` when a sign-preserving zero is detected.
    """
    if window is None:
        window = kernel.default_window()
    if window <= 0:
        raise ValueError("window must be positive")
    freq = _trig_frequency(kernel.spec)
    if grid_density is None:
        step = min(0.25, math.pi / (8.0 * freq)) if freq > 0 else 0.25
    else:
        step = 1.0 / grid_density

    left = _scan_on_side(kernel, "left", window, step)
    right = _scan_on_side(kernel, "right", window, step)

    # oscillatory forms keep crossing beyond any finite window
    period = math.pi / freq if freq > 0 else math.inf
    last = max([loc for loc, _ in left + right], default=0.0)
    truncated = bool(freq > 0 and (left or right) and window - last < 2.0 * period)
    return ZeroStructure(tuple(left), tuple(right), truncated, float(window))


def _scan_on_side(kernel: Kernel, side: str, window: float, step: float):
    rep = kernel.left_rep if side == "left" else kernel.right_rep
    sign_flip = -1.0 if side == "left" else 1.0
    grid = np.sort(np.arange(step * 0.5, window, step) * sign_flip)
    f = lambda u: rep.real_eval(u)
    slope = rep.derivative()
    out = []
    for br in scan_sign_changes(f, grid):
        loc = find_root_bracketed(f, br, tol=1e-13)
        sgn = 1 if slope.real_eval(loc) > 0 else -1
        out.append((float(abs(loc)), sgn))

    # a sign-preserving zero hides at an interior extremum where |K| vanishes
    big_c, rho = kernel.envelope
    for br in scan_sign_changes(lambda u: slope.real_eval(u), grid):
        x_star = find_root_bracketed(lambda u: slope.real_eval(u), br, tol=1e-12)
        if abs(f(x_star)) < 1e-9 * big_c * math.exp(-rho * abs(x_star)):
            raise TangentialZero(
                f"kernel touches zero without crossing near |x|={abs(x_star):.6g}"
            )
    out.sort(key=lambda c: c[0])
    return out


# ---------------------------------------------------------------------------
# repeated integral and wave-speed conditions
# ---------------------------------------------------------------------------


def repeated_integral_rep(kernel: Kernel, n: int) -> ExpPolySum:
    """Closed-form representation of the n-fold repeated integral of ``|x| K(x)``
    on the left half-line (order 0 is ``|x| K(x)`` itself)."""
    if n < 0:
        raise ValueError("order must be >= 0")
    cache = kernel._rep_cache
    if 0 not in cache:
        cache[0] = kernel.left_rep.times_x().scale(-1.0)
    top = max(cache)
    while top < n:
        cache[top + 1] = cache[top].integral_to_zero()
        top += 1
    return cache[n]


def repeated_integral(kernel: Kernel, n: int, x) -> float:
    """Evaluate the n-fold repeated integral of ``|x| K`` at ``x <= 0``."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs > 1e-12):
        raise ValueError("repeated integral is defined on the left half-line")
    out = repeated_integral_rep(kernel, n).real_eval(xs)
    return out


@dataclass(frozen=True)
class WaveSpeedConditionReport:
    """Sign verdict for the repeated integral on the left half-line.

    ``kind`` is "A" (never negative), "B" (one switch, positive near the
    origin), "C" (one switch, negative near the origin), or "none";
    ``order`` is the smallest depth at which the verdict holds and
    ``switch_point`` the magnitude of the sign-change location for B/C.
    """

    kind: str
    order: int | None
    switch_point: float | None
    evidence_grid: tuple[tuple[float, float], ...]

    @property
    def label(self) -> str:
        return "none" if self.kind == "none" else f"{self.kind}{self.order}"


def _condition_grid(window: float, n_points: int = 2000) -> np.ndarray:
    # uniform half resolves the oscillation, geometric half resolves the tail
    uniform = np.linspace(-window, 0.0, n_points // 2)
    geom = -window * np.geomspace(1e-6, 1.0, n_points - n_points // 2)
    return np.unique(np.concatenate([uniform, geom, [0.0]]))


def _far_field_sign(rep: ExpPolySum, window: float) -> int:
    """Sign of the rep as x -> -inf, from its polynomial part.

    Returns +1, -1, or 0 when the polynomial part vanishes identically
    (the decaying terms then control the far field and the window check
    already covers them).
    """
    poly = rep.polynomial_part()
    nz = np.nonzero(np.abs(poly) > 1e-13 * max(np.max(np.abs(poly), initial=0.0), 1e-30))[0]
    if nz.size == 0:
        return 0
    lead = nz[-1]
    sign = np.sign(poly[lead]) * (1 if lead % 2 == 0 else -1)
    # a lower-order root beyond the window would flip the sign out there
    roots = np.roots(poly[: lead + 1][::-1]) if lead >= 1 else np.array([])
    for r in roots:
        if abs(r.imag) < 1e-9 and r.real < -window:
            return 0
    return int(sign)


def wave_speed_condition(kernel: Kernel, n_max: int = 6, window: float | None = None) -> WaveSpeedConditionReport:
    """Smallest repeated-integral depth with a one-switch sign pattern.

    For each depth the closed-form repeated integral is evaluated on a hybrid
    grid over ``[-window, 0]`` and classified as A (non-negative), B (positive
    block near the origin, non-positive beyond) or C (the mirror image).  The
    far field beyond the window is certified through the sign of the
    polynomial part of the representation.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if window is None:
        window = kernel.default_window()
    grid = _condition_grid(window)
    for n in range(1, n_max + 1):
        rep = repeated_integral_rep(kernel, n)
        vals = rep.real_eval(grid)
        scale = np.max(np.abs(vals))
        tol = 1e-9 * max(scale, 1e-300)
        far = _far_field_sign(rep, window)

        signs = np.zeros(grid.size, dtype=int)
        signs[vals > tol] = 1
        signs[vals < -tol] = -1
        nonzero = signs[signs != 0]
        blocks = [int(nonzero[0])] if nonzero.size else []
        for s in nonzero[1:]:
            if s != blocks[-1]:
                blocks.append(int(s))

        evidence = tuple(zip(map(float, grid[:: max(1, grid.size // 200)]),
                             map(float, vals[:: max(1, grid.size // 200)])))
        if (not blocks or blocks == [1]) and far >= 0:
            return WaveSpeedConditionReport("A", n, None, evidence)
        # grid runs -window..0, so a B pattern reads [-1, +1] left to right
        if blocks == [-1, 1] and far <= 0:
            switch = _refine_switch(rep, grid, signs)
            return WaveSpeedConditionReport("B", n, switch, evidence)
        if blocks == [1, -1] and far >= 0:
            switch = _refine_switch(rep, grid, signs)
            return WaveSpeedConditionReport("C", n, switch, evidence)
    return WaveSpeedConditionReport("none", None, None, evidence)


def _refine_switch(rep: ExpPolySum, grid: np.ndarray, signs: np.ndarray) -> float:
    nz = np.nonzero(signs)[0]
    flip_hi = None
    for a, b in zip(nz[:-1], nz[1:]):
        if signs[a] != signs[b]:
            flip_hi = (grid[a], grid[b])
    lo, hi = flip_hi
    f = lambda u: rep.real_eval(u)
    root = find_root_bracketed(f, Bracket(float(lo), float(hi), f(float(lo)), f(float(hi))), tol=1e-11)
    return float(abs(root))


# ---------------------------------------------------------------------------
# threshold conditions and classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Margin:
    """One checked partial-integral inequality at a crossing."""

    crossing_index: int
    value: float
    bound: float
    side: str


@dataclass(frozen=True)
class ThresholdConditionReport:
    """Outcome of the left/right threshold inequalities.

    ``left``/``right`` take the values "L0"/"L+"/"L-"/"fail" and
    "R0"/"R+"/"R-"/"fail"; counts carry the number of enumerated crossings
    with ``infinite`` flags set when the pattern provably continues past the
    window (tail bound checked).
    """

    left: str
    left_count: int
    left_infinite: bool
    right: str
    right_count: int
    right_infinite: bool
    margins: tuple[Margin, ...]

    def side_label(self, side: str) -> str:
        kind, count, inf_flag = (
            (self.left, self.left_count, self.left_infinite)
            if side == "left"
            else (self.right, self.right_count, self.right_infinite)
        )
        if kind.endswith("0"):
            return kind
        if kind == "fail":
            return "fail"
        return f"{kind[0]}{'-' if kind.endswith('-') else ''}{'inf' if inf_flag else count}"


def threshold_conditions(kernel: Kernel, zeros: ZeroStructure, alpha: float, theta: float) -> ThresholdConditionReport:
    """Check every required partial-integral inequality at the crossings.

    Raises :class:`MarginViolation` on the first failing inequality; the
    tail bound certifies all crossings beyond the enumeration window when the
    structure is truncated.
    """
    if not 0 < 2 * theta < alpha:
        raise ValueError("threshold conditions need 0 < 2*theta < alpha")
    margins: list[Margin] = []
    failures: list[int] = []

    left_kind, left_inf = _side_verdict(kernel, zeros, alpha, theta, "left", margins, failures)
    right_kind, right_inf = _side_verdict(kernel, zeros, alpha, theta, "right", margins, failures)
    if failures:
        raise MarginViolation(
            f"threshold margins failed at crossings {failures}", failing_indices=failures
        )
    return ThresholdConditionReport(
        left=left_kind,
        left_count=len(zeros.left_crossings),
        left_infinite=left_inf,
        right=right_kind,
        right_count=len(zeros.right_crossings),
        right_infinite=right_inf,
        margins=tuple(margins),
    )


def _side_verdict(kernel, zeros, alpha, theta, side, margins, failures):
    crossings = zeros.left_crossings if side == "left" else zeros.right_crossings
    if not crossings:
        return ("L0" if side == "left" else "R0"), False

    first_slope = crossings[0][1]
    # left: excitation near the origin crosses downward in |x|, i.e. K' > 0 at -M1
    if side == "left":
        oriented_plus = first_slope > 0
        kind = "L+" if oriented_plus else "L-"
        # margin checks sit at even crossings for L+, odd (from the 3rd) for L-
        if oriented_plus:
            checked = range(2, len(crossings) + 1, 2)
        else:
            checked = range(3, len(crossings) + 1, 2)
        for idx in checked:
            m_loc = crossings[idx - 1][0]
            partial = kernel.cdf(0.0) - kernel.cdf(-m_loc)
            value = alpha / 2.0 - alpha * partial
            margins.append(Margin(idx, float(value), theta, side))
            if not value < theta:
                failures.append(idx)
    else:
        oriented_minus = first_slope > 0  # K' > 0 at N1 means inhibition near the origin
        kind = "R-" if oriented_minus else "R+"
        if oriented_minus:
            checked = range(1, len(crossings) + 1, 2)
        else:
            checked = range(2, len(crossings) + 1, 2)
        for idx in checked:
            n_loc = crossings[idx - 1][0]
            partial = kernel.cdf(n_loc) - kernel.cdf(0.0)
            value = alpha / 2.0 + alpha * partial
            margins.append(Margin(idx, float(value), theta, side))
            if not value > theta:
                failures.append(idx)

    infinite = False
    if zeros.truncated:
        big_c, rho = kernel.envelope
        tail = alpha * big_c * math.exp(-rho * zeros.window) / rho
        # beyond the window the partial integrals differ from alpha/2 by < tail
        ok = tail < theta if side == "left" else tail < alpha - theta
        if ok:
            infinite = True
        else:
            failures.append(len(crossings) + 1)
    return kind, infinite


@dataclass(frozen=True)
class KernelClassReport:
    """Combined verdict: kernel family plus wave-speed and threshold evidence."""

    family: str
    j: int | None
    k: int | None
    j_infinite: bool
    k_infinite: bool
    wave_speed: WaveSpeedConditionReport
    threshold: ThresholdConditionReport

    @property
    def classified(self) -> bool:
        return self.family != "unclassified"

    @property
    def label(self) -> str:
        if not self.classified:
            return "unclassified"
        j = "inf" if self.j_infinite else str(self.j)
        k = "inf" if self.k_infinite else str(self.k)
        return f"{self.family}({j},{k})"


def classify(kernel: Kernel, alpha: float, theta: float, n_max: int = 6, window: float | None = None) -> KernelClassReport:
    """Compose zero structure, wave-speed and threshold checks into a class.

    Family A pairs an "A" sign condition with plus-oriented (or absent)
    crossings on both sides, family B the same threshold pattern with a "B"
    condition, and family C a "C" condition with minus-oriented crossings.
    Anything else, including failed margins, is unclassified.
    """
    zeros = zero_structure(kernel, window=window)
    speed = wave_speed_condition(kernel, n_max=n_max, window=window)
    try:
        thresh = threshold_conditions(kernel, zeros, alpha, theta)
    except MarginViolation as exc:
        thresh = ThresholdConditionReport(
            left="fail", left_count=len(zeros.left_crossings), left_infinite=False,
            right="fail", right_count=len(zeros.right_crossings), right_infinite=False,
            margins=(),
        )
        return KernelClassReport("unclassified", None, None, False, False, speed, thresh)

    family = "unclassified"
    left_plus = thresh.left in ("L0", "L+")
    right_plus = thresh.right in ("R0", "R+")
    right_minus = thresh.right in ("R-", "R0")
    if speed.kind == "A" and left_plus and right_plus:
        family = "A"
    elif speed.kind == "B" and thresh.left == "L+" and right_plus:
        family = "B"
    elif speed.kind == "C" and thresh.left == "L-" and right_minus:
        family = "C"
    if family == "unclassified":
        return KernelClassReport("unclassified", None, None, False, False, speed, thresh)
    return KernelClassReport(
        family,
        thresh.left_count,
        thresh.right_count,
        thresh.left_infinite,
        thresh.right_infinite,
        speed,
        thresh,
    )
