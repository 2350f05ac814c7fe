"""Exact calculus on finite sums of ``c * x**m * exp(q*x)`` terms.

Every built-in coupling kernel restricted to one half-line is such a sum
(trigonometric factors become conjugate pairs of complex exponentials), and
the family is closed under differentiation, antidifferentiation,
multiplication by x, and exponential weighting.  That closure is what makes
repeated integrals, speed-index transforms, stability-index evaluations and
pulse profiles available in closed form; the adaptive quadrature in
:mod:`wavefront.numerics` provides the independent cross-check.

Anchored primitives are used throughout so that no intermediate exponential
overflows: ``tail_integral(s, w)`` evaluates ``exp(-s*w) * integral`` rather
than the raw integral, which keeps every exponent's real part non-positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MERGE_TOL = 1e-14


@dataclass(frozen=True)
class Term:
    """One summand ``coef * x**power * exp(rate*x)``."""

    coef: complex
    rate: complex
    power: int


class ExpPolySum:
    """A finite sum of :class:`Term`, representing a function on a half-line.

    Instances are immutable.  Sums built to represent real functions carry
    conjugate term pairs, so ``real_eval`` discards only rounding noise.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        merged: dict[tuple[complex, int], complex] = {}
        for t in terms:
            key = (complex(t.rate), int(t.power))
            merged[key] = merged.get(key, 0.0) + complex(t.coef)
        scale = max((abs(c) for c in merged.values()), default=0.0)
        kept = []
        for (rate, power), coef in merged.items():
            if abs(coef) > _MERGE_TOL * max(scale, 1.0) * 1e-2 or scale == 0.0:
                kept.append(Term(coef, rate, power))
        kept.sort(key=lambda t: (t.rate.real, t.rate.imag, t.power))
        self.terms = tuple(kept)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def constant(value: complex) -> "ExpPolySum":
        return ExpPolySum([Term(value, 0.0, 0)])

    @staticmethod
    def exponential(coef: complex, rate: complex) -> "ExpPolySum":
        return ExpPolySum([Term(coef, rate, 0)])

    @staticmethod
    def exp_cos(coef: float, rate: float, freq: float, phase: float = 0.0) -> "ExpPolySum":
        """``coef * exp(rate*x) * cos(freq*x + phase)`` as a conjugate pair."""
        half = 0.5 * coef
        return ExpPolySum(
            [
                Term(half * np.exp(1j * phase), rate + 1j * freq, 0),
                Term(half * np.exp(-1j * phase), rate - 1j * freq, 0),
            ]
        )

    @staticmethod
    def exp_sin(coef: float, rate: float, freq: float, phase: float = 0.0) -> "ExpPolySum":
        """``coef * exp(rate*x) * sin(freq*x + phase)`` as a conjugate pair."""
        half = coef / 2j
        return ExpPolySum(
            [
                Term(half * np.exp(1j * phase), rate + 1j * freq, 0),
                Term(-half * np.exp(-1j * phase), rate - 1j * freq, 0),
            ]
        )

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other: "ExpPolySum") -> "ExpPolySum":
        return ExpPolySum(list(self.terms) + list(other.terms))

    def scale(self, factor: complex) -> "ExpPolySum":
        return ExpPolySum([Term(t.coef * factor, t.rate, t.power) for t in self.terms])

    def times_x(self) -> "ExpPolySum":
        return ExpPolySum([Term(t.coef, t.rate, t.power + 1) for t in self.terms])

    def weighted(self, s: complex) -> "ExpPolySum":
        """Multiply by ``exp(s*x)``."""
        return ExpPolySum([Term(t.coef, t.rate + s, t.power) for t in self.terms])

    def derivative(self) -> "ExpPolySum":
        out = []
        for t in self.terms:
            if t.power > 0:
                out.append(Term(t.coef * t.power, t.rate, t.power - 1))
            out.append(Term(t.coef * t.rate, t.rate, t.power))
        return ExpPolySum(out)

    # -- evaluation --------------------------------------------------------------

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape, dtype=complex)
        for t in self.terms:
            total += t.coef * np.power(x, t.power, dtype=complex) * np.exp(t.rate * x)
        return total if total.shape else complex(total)

    def real_eval(self, x):
        out = self.eval(x)
        return out.real if isinstance(out, complex) else np.real(out)

    # -- calculus primitives ------------------------------------------------------

    def integral_to_zero(self) -> "ExpPolySum":
        """The function ``x -> integral of self from x to 0`` (exact)."""
        out: list[Term] = []
        const = 0.0 + 0.0j
        for t in self.terms:
            if abs(t.rate) == 0.0:
                # plain power: integral from x to 0 of c*s**m ds = -c*x**(m+1)/(m+1)
                out.append(Term(-t.coef / (t.power + 1), 0.0, t.power + 1))
            else:
                poly = _antiderivative_poly(t.power, t.rate)
                # F(0) - F(x) with F(x) = exp(q x) * sum_k poly[k] x**k
                const += t.coef * poly[0]
                out.extend(Term(-t.coef * pk, t.rate, k) for k, pk in enumerate(poly))
        out.append(Term(const, 0.0, 0))
        return ExpPolySum(out)

    def tail_integral(self, s: complex, w) -> complex:
        """``exp(-s*w) * integral_{-inf}^{w} exp(s*x) f(x) dx`` for ``w <= 0``.

        Requires ``Re(s + rate) > 0`` for every term so the tail converges.
        """
        w = np.asarray(w, dtype=float)
        total = np.zeros(w.shape, dtype=complex)
        for t in self.terms:
            p = s + t.rate
            if p.real <= 0.0:
                raise ValueError("tail integral diverges: Re(s + rate) <= 0")
            poly = _antiderivative_poly(t.power, p)
            acc = np.zeros(w.shape, dtype=complex)
            for k in range(t.power, -1, -1):
                acc = acc * w + poly[k]
            total += t.coef * np.exp(t.rate * w) * acc
        return total if total.shape else complex(total)

    def anchored_partial_integral(self, s: complex, w) -> complex:
        """``exp(-s*w) * integral_{0}^{w} exp(s*x) f(x) dx`` for ``w >= 0``.

        Stable for right-half-line sums (``Re(rate) <= 0``) even when
        ``s*w`` is large, because the anchor keeps every exponent's real
        part non-positive.
        """
        w = np.asarray(w, dtype=float)
        total = np.zeros(w.shape, dtype=complex)
        for t in self.terms:
            p = s + t.rate
            wp = np.abs(w) * abs(p)
            if abs(p) < 1e-8 and np.all(wp < 0.25):
                # nearly resonant exponent: series in p avoids cancellation
                acc = np.zeros(w.shape, dtype=complex)
                fac = 1.0
                for j in range(24):
                    if j > 0:
                        fac *= j
                    acc = acc + (p**j / fac) * np.power(w, t.power + j + 1) / (t.power + j + 1)
                total += t.coef * np.exp(-s * w) * acc
            else:
                poly = _antiderivative_poly(t.power, p)
                acc = np.zeros(w.shape, dtype=complex)
                for k in range(t.power, -1, -1):
                    acc = acc * w + poly[k]
                total += t.coef * (np.exp(t.rate * w) * acc - np.exp(-s * w) * poly[0])
        return total if total.shape else complex(total)

    def halfline_transform(self, s, continued: bool = False) -> complex:
        """``integral_{-inf}^{0} exp(s*x) f(x) dx``; vectorized over ``s``.

        Needs ``Re(s + rate) > 0`` per term unless ``continued`` is set, in
        which case the rational expression is evaluated as the analytic
        continuation past the abscissa of convergence.
        """
        s = np.asarray(s)
        total = np.zeros(s.shape, dtype=complex)
        for t in self.terms:
            p = s + t.rate
            if not continued and np.any(np.real(p) <= 0.0):
                raise ValueError("transform diverges: Re(s + rate) <= 0")
            m = t.power
            sign = -1.0 if m % 2 else 1.0
            total += t.coef * sign * math.factorial(m) / p ** (m + 1)
        return total if total.shape else complex(total)

    def polynomial_part(self) -> np.ndarray:
        """Real coefficients (ascending) of the zero-rate polynomial terms."""
        deg = max((t.power for t in self.terms if abs(t.rate) == 0.0), default=-1)
        coeffs = np.zeros(deg + 1 if deg >= 0 else 0)
        for t in self.terms:
            if abs(t.rate) == 0.0:
                coeffs[t.power] += t.coef.real
        return coeffs

    def decay_scale(self) -> float:
        """Smallest positive real part among non-polynomial rates (0 if none)."""
        rates = [t.rate.real for t in self.terms if abs(t.rate) != 0.0]
        return min((abs(r) for r in rates), default=0.0)


def _antiderivative_poly(m: int, p: complex) -> list[complex]:
    """Coefficients ``a_k`` with ``d/dx [exp(p x) sum a_k x**k] = x**m exp(p x)``."""
    coeffs = [0.0 + 0.0j] * (m + 1)
    acc = 1.0 / p
    coeffs[m] = acc
    fall = 1.0
    for k in range(1, m + 1):
        fall *= m - k + 1
        acc = acc / p
        coeffs[m - k] = (-1.0) ** k * fall * acc
    return coeffs
