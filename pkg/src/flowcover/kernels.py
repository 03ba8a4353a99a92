"""Clamping and smoothed-clamping reparametrizations of the extended line.

``theta`` clamps to an interval [alpha, beta]; ``Theta`` is its smoothing by
the weight 1/(2 e^{|s|}), with the closed five-branch form.  Both map the
extended reals onto [alpha, beta] and are monotone and non-expanding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .extreal import ExtReal, NEG_INF, POS_INF


class DegenerateIntervalError(ValueError):
    """alpha = beta: the derivative and the inverse are undefined."""


@dataclass(frozen=True)
class Interval:
    alpha: ExtReal
    beta: ExtReal

    def __post_init__(self):
        object.__setattr__(self, "alpha", ExtReal.of(self.alpha))
        object.__setattr__(self, "beta", ExtReal.of(self.beta))
        if self.alpha > self.beta:
            raise ValueError("need alpha <= beta")

    @staticmethod
    def of(alpha, beta) -> "Interval":
        return Interval(ExtReal.of(alpha), ExtReal.of(beta))

    @property
    def degenerate(self) -> bool:
        return self.alpha == self.beta


WHOLE_LINE = Interval(NEG_INF, POS_INF)


def theta(iv: Interval, t) -> ExtReal:
    """Clamp t into [alpha, beta].  Exact on exact input."""
    t = ExtReal.of(t)
    if t <= iv.alpha:
        return iv.alpha
    if t >= iv.beta:
        return iv.beta
    return t


def _half_exp(x: ExtReal) -> float:
    """e^x / 2 with e^{-inf} = 0; x = +inf never occurs on valid branches."""
    if x.sign < 0:
        return 0.0
    if x.sign > 0:
        raise ArithmeticError("e^{+inf} encountered")
    return math.exp(float(x.value)) / 2.0


def Theta(iv: Interval, t) -> ExtReal:
    """Smoothed clamp; five branches including the degenerate infinite ones."""
    t = ExtReal.of(t)
    a, b = iv.alpha, iv.beta
    if t == NEG_INF and a == NEG_INF:
        return NEG_INF
    if t == POS_INF and b == POS_INF:
        return POS_INF
    if t <= a:  # here a is finite
        return ExtReal(float(a.value) + _half_exp(t - a) - _half_exp(t - b))
    if t >= b:  # here b is finite
        return ExtReal(float(b.value) + _half_exp(a - t) - _half_exp(b - t))
    # a <= t <= b with t finite
    val = float(t.value) + _half_exp(a - t) - _half_exp(t - b)
    return ExtReal(val)


def Theta_derivative(iv: Interval, t: float) -> float:
    """d/dt Theta at finite t, for a nondegenerate interval."""
    if iv.degenerate:
        raise DegenerateIntervalError("derivative undefined for alpha = beta")
    t = ExtReal.of(float(t))
    if not t.is_finite:
        raise ValueError("t must be finite")
    a, b = iv.alpha, iv.beta
    if t <= a:
        return _half_exp(t - a) - _half_exp(t - b)
    if t >= b:
        return -_half_exp(a - t) + _half_exp(b - t)
    return 1.0 - _half_exp(a - t) - _half_exp(t - b)


def Theta_inverse(iv: Interval, y, tol: float = 1e-12) -> ExtReal:
    """The t with Theta(t) = y, to within |Theta(t) - y| <= tol.

    y = alpha maps to -inf and y = beta to +inf (the only preimages when the
    endpoint is finite); interior y is found by monotone bisection, using
    that Theta is non-expanding (interval width <= tol suffices).
    """
    if iv.degenerate:
        raise DegenerateIntervalError("inverse undefined for alpha = beta")
    if tol <= 0:
        raise ValueError("tol must be positive")
    y = ExtReal.of(y)
    if y < iv.alpha or y > iv.beta:
        raise ValueError("y outside [alpha, beta]")
    if y == iv.alpha:
        return NEG_INF
    if y == iv.beta:
        return POS_INF
    yf = float(y)
    # bracket: Theta(t) <= y <= Theta(t_hi)
    lo, hi = yf - 2.0, yf + 2.0
    step = 2.0
    while float(Theta(iv, ExtReal(lo))) > yf:
        lo -= step
        step *= 2
    step = 2.0
    while float(Theta(iv, ExtReal(hi))) < yf:
        hi += step
        step *= 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if float(Theta(iv, ExtReal(mid))) < yf:
            lo = mid
        else:
            hi = mid
    return ExtReal(0.5 * (lo + hi))


def theta_exact(iv: Interval, t) -> ExtReal:
    """theta on exact (Fraction) data, preserving exactness."""
    return theta(iv, t)


def theta_kinks(iv: Interval, shift: float = 0.0) -> list:
    """Finite kink locations of s -> theta(s + shift), used to split
    quadratures at the points where the clamp changes branch."""
    out = []
    for end in (iv.alpha, iv.beta):
        if end.is_finite:
            out.append(float(end) - shift)
    return out


def smoothing_quadrature(iv: Interval, t: float, halfwidth: float = 40.0,
                         order: int = 96) -> float:
    """Numeric evaluation of the smoothing integral

        int theta(t+s) / (2 e^{|s|}) ds,   truncated to |s| <= halfwidth,

    by Gauss-Legendre on the smooth pieces (splitting at s = 0 and at the
    clamp kinks).  The truncation error is at most
    (|alpha| + |beta| + |t| + 1) * e^{-halfwidth}.
    """
    import numpy as np

    cuts = {-halfwidth, 0.0, halfwidth}
    for kink in theta_kinks(iv, shift=t):
        if -halfwidth < kink < halfwidth:
            cuts.add(kink)
    grid = sorted(cuts)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    total = 0.0
    a = float(iv.alpha) if iv.alpha.is_finite else None
    b = float(iv.beta) if iv.beta.is_finite else None
    for lo, hi in zip(grid[:-1], grid[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        s = mid + half * nodes
        vals = t + s
        if a is not None:
            vals = np.maximum(vals, a)
        if b is not None:
            vals = np.minimum(vals, b)
        total += half * float(np.sum(weights * vals / (2.0 * np.exp(np.abs(s)))))
    return total
