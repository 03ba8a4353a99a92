"""The geodesic flow space over a tree instance.

Points are equivalence classes of triples (a, b, t) with a, b in the
compactified tree and t extended-real; the identifications collapse
(a, b, -inf) to the vertex a, (a, b, +inf) to the vertex b, and (a, a, t)
to the vertex a.  Canonical form stores the collapsed points explicitly.

The support function of a point against a probe vertex u is

    l(u, (a,b,t)) = <a|b>_u + | theta_{[-<b|x0>_a, <a|x0>_b]}(t) - <a,b|u,x0> |

and the pseudometric is the supremum over probe vertices u of the support
difference.  On a tree that supremum is attained on the finite "hull" of
the six defining points (pairwise geodesics, rays truncated once all
products stabilize): off the hull both Gromov products grow at the same
rate and the double differences freeze, so the support difference is
constant along branches.  We therefore evaluate the sup exactly over an
explicit candidate list; a brute-force ball supremum serves as an oracle
in the test suite.

The metric integrates the flowed pseudometric against the weight
1/(2 e^{|tau|}).  Per smooth segment the integrand is a maximum of
piecewise-linear functions of tau, so between breakpoints it is convex;
we integrate with a certified midpoint/trapezoid bracket and report the
accumulated error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .extreal import ExtReal, NEG_INF, POS_INF
from .kernels import Interval, Theta, Theta_inverse, theta
from .tree import (
    BoundaryPoint,
    ComplexInstance,
    DomainError,
    PointBar,
    double_difference_raw,
    geodesic_vertices,
    gromov_product_raw,
    is_interior,
    lcp,
    points_equal,
)
from .words import Word


# ---------------------------------------------------------------------------
# points of the flow space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlowPoint:
    """Canonical point: either a vertex of the complex or a generic triple."""

    a: PointBar
    b: PointBar
    t: Union[Fraction, float]
    at_vertex: bool = False

    @property
    def vertex(self) -> Word:
        if not self.at_vertex:
            raise ValueError("not a vertex point")
        return self.a

    def __repr__(self):
        if self.at_vertex:
            return f"FlowPoint(vertex={self.a!r})"
        return f"FlowPoint({self.a!r}, {self.b!r}, {self.t!r})"


def at_vertex(v: Word) -> FlowPoint:
    return FlowPoint(v, v, Fraction(0), at_vertex=True)


def make_point(instance: ComplexInstance, a: PointBar, b: PointBar, t) -> FlowPoint:
    """Build the canonical form of (a, b, t).

    Collapses t = -inf (a interior) and t = +inf (b interior) to vertex
    points, and (a, a, t) with a interior to the vertex a.  Rejects the
    inadmissible combinations: a boundary with t = -inf, b boundary with
    t = +inf, and a = b both boundary.
    """
    a = instance.check_point(a)
    b = instance.check_point(b)
    te = ExtReal.of(t)
    a_int = is_interior(a)
    b_int = is_interior(b)
    if not a_int and te == NEG_INF:
        raise DomainError("a on the boundary forbids t = -inf")
    if not b_int and te == POS_INF:
        raise DomainError("b on the boundary forbids t = +inf")
    if not a_int and not b_int and points_equal(a, b):
        raise DomainError("equal boundary endpoints are not a flow point")
    if te == NEG_INF:
        return at_vertex(a)
    if te == POS_INF:
        return at_vertex(b)
    if a_int and b_int and a == b:
        return at_vertex(a)
    value = te.value
    if isinstance(value, int):
        value = Fraction(value)
    return FlowPoint(a, b, value)


def flow(p: FlowPoint, tau) -> FlowPoint:
    """The flow: translate the time coordinate; vertex points are fixed."""
    if p.at_vertex:
        return p
    return FlowPoint(p.a, p.b, p.t + tau)


@dataclass(frozen=True)
class FSConfig:
    """Numeric knobs for flow space computations.

    ``sup_radius`` pads the ray truncation depth used for the support
    supremum beyond the provable stabilization depth; the computation
    flags itself unstable if the deepest probes still move the value.
    """

    sup_radius: int = 8
    quad_halfwidth: float = 40.0
    quad_tol: float = 1e-8


DEFAULT_CONFIG = FSConfig()


# ---------------------------------------------------------------------------
# support function
# ---------------------------------------------------------------------------


def line_interval(instance: ComplexInstance, a: PointBar, b: PointBar) -> Interval:
    """The clamp interval [-<b|x0>_a, <a|x0>_b] of the line through (a, b)."""
    x0 = instance.base_point
    alpha = -instance.gromov_product(b, x0, a)
    beta = instance.gromov_product(a, x0, b)
    return Interval(alpha, beta)


def support_fn(instance: ComplexInstance, u: Word, p: FlowPoint):
    """l(u, p); exact (Fraction) whenever p.t is exact."""
    instance.check_vertex(u)
    if p.at_vertex:
        return instance.dhat(u, p.vertex)
    iv = line_interval(instance, p.a, p.b)
    clamped = theta(iv, ExtReal.of(p.t))
    e = instance.double_difference(p.a, p.b, u, instance.base_point)
    gp = instance.gromov_product(p.a, p.b, u)
    # gp is finite: u is interior and a = b (both boundary) is excluded
    return gp.value + abs(clamped.value - e)


# ---------------------------------------------------------------------------
# the support-difference profile of a pair of points
# ---------------------------------------------------------------------------


def _iter_points(p: FlowPoint):
    yield p.a
    yield p.b


def _as_pair(p: FlowPoint) -> Tuple[PointBar, PointBar, Union[Fraction, float]]:
    if p.at_vertex:
        return p.a, p.a, Fraction(0)
    return p.a, p.b, p.t


class PairProfile:
    """Support-difference data of a pair of flow points.

    Holds, for every probe candidate u, the constants

        A(u)  = <a|b>_u - <c|d>_u
        e1(u) = <a,b|u,x0>
        e2(u) = <c,d|u,x0>

    so that the pseudometric of the pair flowed by tau is

        max_u | A(u) + |theta_1(t+tau) - e1(u)| - |theta_2(s+tau) - e2(u)| |.
    """

    def __init__(self, instance: ComplexInstance, p: FlowPoint, q: FlowPoint,
                 config: FSConfig = DEFAULT_CONFIG):
        self.instance = instance
        self.p = p
        self.q = q
        self.config = config
        a, b, t = _as_pair(p)
        c, d, s = _as_pair(q)
        self.t = t
        self.s = s
        self.iv1 = line_interval(instance, a, b)
        self.iv2 = line_interval(instance, c, d)
        pts = [instance.base_point, a, b, c, d]
        # stabilization depth: beyond every pairwise confluence all lcps
        # (hence all products against u on a ray) are affine in the depth
        finite_lcps = [0]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                v = lcp(pts[i], pts[j])
                if v.is_finite:
                    finite_lcps.append(int(v.value))
        for x in pts:
            if is_interior(x):
                finite_lcps.append(len(x))
            else:
                finite_lcps.append(x.depth())
        d_stab = max(finite_lcps) + 1
        bound_mag = [abs(float(v)) for v in (t, s) if _is_finite_number(v)]
        for ivl in (self.iv1, self.iv2):
            for end in (ivl.alpha, ivl.beta):
                if end.is_finite:
                    bound_mag.append(abs(float(end)))
        pad = int(math.ceil(config.quad_halfwidth + max(bound_mag, default=0.0))) + 2
        depth = d_stab + pad + config.sup_radius
        self.ray_depth = depth

        seen = set()
        cands: list = []
        for i in range(len(pts)):
            for j in range(i, len(pts)):
                if i == j and is_interior(pts[i]):
                    vs = [pts[i]]
                else:
                    vs = geodesic_vertices(instance, pts[i], pts[j], depth)
                for u in vs:
                    if u not in seen:
                        seen.add(u)
                        cands.append(u)
        x0 = instance.base_point
        A, E1, E2, depths = [], [], [], []
        for u in cands:
            gp1 = gromov_product_raw(a, b, u)
            gp2 = gromov_product_raw(c, d, u)
            A.append(gp1.value - gp2.value)
            E1.append(double_difference_raw(a, b, u, x0))
            E2.append(double_difference_raw(c, d, u, x0))
            depths.append(len(u))
        self.candidates = cands
        self.A = A
        self.E1 = E1
        self.E2 = E2
        self._depths = depths
        self._fA = np.array([float(x) for x in A])
        self._fE1 = np.array([float(x) for x in E1])
        self._fE2 = np.array([float(x) for x in E2])
        self._max_depth = max(depths)
        self.stable = self._tail_stable()

    # -- exact pointwise evaluation ---------------------------------------
    def support_gap(self, tau=0):
        """d^x of the pair flowed by tau, exact on exact input."""
        th1 = theta(self.iv1, ExtReal.of(self.t + tau)).value
        th2 = theta(self.iv2, ExtReal.of(self.s + tau)).value
        best = None
        for a_u, e1, e2 in zip(self.A, self.E1, self.E2):
            val = abs(a_u + abs(th1 - e1) - abs(th2 - e2))
            if best is None or val > best:
                best = val
        return best

    def _values_at(self, taus: np.ndarray) -> np.ndarray:
        """Envelope values at an array of taus (floats)."""
        th1 = _theta_float(self.iv1, float(self.t), taus)
        th2 = _theta_float(self.iv2, float(self.s), taus)
        inner = (
            self._fA[None, :]
            + np.abs(th1[:, None] - self._fE1[None, :])
            - np.abs(th2[:, None] - self._fE2[None, :])
        )
        return np.max(np.abs(inner), axis=1)

    def _tail_stable(self) -> bool:
        """Check the deepest ray probes no longer move the envelope."""
        if self._max_depth <= 1:
            return True
        deep = [i for i, dep in enumerate(self._depths) if dep >= self._max_depth]
        if not deep:
            return True
        probes = np.array([-self.config.quad_halfwidth, -1.0, 0.0, 1.0,
                           self.config.quad_halfwidth])
        th1 = _theta_float(self.iv1, float(self.t), probes)
        th2 = _theta_float(self.iv2, float(self.s), probes)
        inner = (
            self._fA[None, :]
            + np.abs(th1[:, None] - self._fE1[None, :])
            - np.abs(th2[:, None] - self._fE2[None, :])
        )
        vals = np.abs(inner)
        full = np.max(vals, axis=1)
        rest = np.delete(vals, deep, axis=1)
        trimmed = np.max(rest, axis=1) if rest.shape[1] else np.zeros_like(full)
        return bool(np.all(full <= trimmed + 1e-9))

    # -- certified integration against the flow weight --------------------
    def metric(self) -> Tuple[float, float]:
        """(value, error bound) of the weighted integral of the envelope."""
        H = self.config.quad_halfwidth
        cuts = {0.0, -H, H}
        for iv, base in ((self.iv1, float(self.t)), (self.iv2, float(self.s))):
            for end in (iv.alpha, iv.beta):
                if end.is_finite:
                    cut = float(end) - base
                    if -H < cut < H:
                        cuts.add(cut)
        grid = sorted(cuts)
        total = 0.0
        err = 0.0
        for lo, hi in zip(grid[:-1], grid[1:]):
            v, e = self._segment_integral(lo, hi)
            total += v
            err += e
        # tail beyond the truncation: envelope grows at most linearly
        # (slope 2), so int_H^inf (m(H) + 2(tau-H)) e^{-tau}/2 bounds it
        edge = self._values_at(np.array([-H, H]))
        err += math.exp(-H) * (float(edge[0]) + float(edge[1]) + 4.0) / 2.0
        return total, err

    def _segment_integral(self, lo: float, hi: float) -> Tuple[float, float]:
        """Integrate envelope * weight over [lo, hi].

        Both clamps are affine here, so every candidate's contribution is
        piecewise linear with breakpoints where a clamp crosses its double
        difference; between breakpoints the envelope is convex and the
        midpoint/trapezoid pair brackets the integral of the envelope.
        """
        if hi - lo <= 0:
            return 0.0, 0.0
        bps = {lo, hi}
        for iv, base, E in ((self.iv1, float(self.t), self._fE1),
                            (self.iv2, float(self.s), self._fE2)):
            a_f = float(iv.alpha) if iv.alpha.is_finite else -math.inf
            b_f = float(iv.beta) if iv.beta.is_finite else math.inf
            mid_end = min(b_f, base + hi)
            mid_start = max(a_f, base + lo)
            if mid_start < mid_end:  # the clamp is the identity somewhere
                for z in np.unique(E):
                    if mid_start <= z <= mid_end:
                        cut = float(z) - base
                        if lo < cut < hi:
                            bps.add(cut)
        pieces = sorted(bps)
        total = 0.0
        err = 0.0
        stack = list(zip(pieces[:-1], pieces[1:]))
        tol_density = self.config.quad_tol / max(hi - lo, 1.0) / 8.0
        while stack:
            xa, xb = stack.pop()
            width = xb - xa
            xm = 0.5 * (xa + xb)
            va, vm, vb = self._values_at(np.array([xa, xm, xb]))
            trap = 0.5 * (va + vb)
            gap = trap - vm  # >= 0 for convex envelope
            wmax = 0.5 * math.exp(-min(abs(xa), abs(xb)) if xa * xb >= 0
                                  else 0.0)
            if gap * width * wmax <= tol_density * width or width < 1e-9:
                # secant approximation, certified by convexity
                v, e = _affine_weighted(va, vb, xa, xb)
                total += v
                err += max(gap, 0.0) * width * wmax + e
            else:
                stack.append((xa, xm))
                stack.append((xm, xb))
        return total, err


def _is_finite_number(x) -> bool:
    try:
        return math.isfinite(float(x))
    except (OverflowError, ValueError):
        return False


def _theta_float(iv: Interval, base: float, taus: np.ndarray) -> np.ndarray:
    vals = base + taus
    if iv.alpha.is_finite:
        vals = np.maximum(vals, float(iv.alpha))
    if iv.beta.is_finite:
        vals = np.minimum(vals, float(iv.beta))
    return vals


def _affine_weighted(va: float, vb: float, xa: float, xb: float) -> Tuple[float, float]:
    """Exact integral of the secant line through (xa,va),(xb,vb) times the
    weight e^{-|tau|}/2 over [xa, xb] (the segment does not straddle 0)."""
    if xb <= 0:
        sign = 1.0  # weight e^{tau}/2
    else:
        sign = -1.0  # weight e^{-tau}/2
    slope = (vb - va) / (xb - xa)
    intercept = va - slope * xa

    def prim(x):
        # int (slope*x + intercept) e^{sign*x}/2 dx
        e = math.exp(sign * x)
        return e * (slope * x + intercept) / (2 * sign) - e * slope / (2 * sign * sign)

    return prim(xb) - prim(xa), 0.0


# ---------------------------------------------------------------------------
# public distances
# ---------------------------------------------------------------------------


def pseudo_dist(instance: ComplexInstance, p: FlowPoint, q: FlowPoint,
                config: FSConfig = DEFAULT_CONFIG):
    """The support-sup pseudometric; exact on exact inputs."""
    return PairProfile(instance, p, q, config).support_gap()


@dataclass(frozen=True)
class DistResult:
    value: float
    error: float
    method: str
    stable: bool = True


def _same_line(p: FlowPoint, q: FlowPoint) -> Optional[Tuple]:
    """If p and q lie on one line (a, b), return (a, b, t_p, t_q) where the
    time coordinates may be extended reals (vertex points count via the
    -inf / +inf identifications)."""
    if p.at_vertex and q.at_vertex:
        return None
    if not p.at_vertex and not q.at_vertex:
        if points_equal(p.a, q.a) and points_equal(p.b, q.b):
            return p.a, p.b, ExtReal.of(p.t), ExtReal.of(q.t)
        return None
    if p.at_vertex:
        p, q = q, p
    # p generic, q a vertex
    v = q.vertex
    if is_interior(p.a) and p.a == v:
        return p.a, p.b, ExtReal.of(p.t), NEG_INF
    if is_interior(p.b) and p.b == v:
        return p.a, p.b, ExtReal.of(p.t), POS_INF
    return None


def dist_info(instance: ComplexInstance, p: FlowPoint, q: FlowPoint,
              config: FSConfig = DEFAULT_CONFIG,
              cross_check: bool = False) -> DistResult:
    """The flow-space metric with an error bound.

    Vertex pairs are exact; points on one line use the closed form; other
    pairs integrate the flowed pseudometric with a certified bracket.
    When ``cross_check`` is set, the closed form is compared against the
    generic quadrature and the larger deviation is reported as the error.
    """
    if p.at_vertex and q.at_vertex:
        value = float(instance.dhat(p.vertex, q.vertex))
        return DistResult(value, 0.0, "vertices")
    line = _same_line(p, q)
    if line is not None:
        a, b, tp, tq = line
        iv = line_interval(instance, a, b)
        value = abs(float(Theta(iv, tp)) - float(Theta(iv, tq)))
        result = DistResult(value, 1e-15 * (1.0 + value), "line-closed-form")
        if cross_check:
            quad = _quad_dist(instance, p, q, config)
            diff = abs(quad.value - value)
            result = DistResult(value, max(result.error, diff + quad.error),
                                "line-cross-checked", quad.stable)
        return result
    return _quad_dist(instance, p, q, config)


def _quad_dist(instance, p, q, config) -> DistResult:
    prof = PairProfile(instance, p, q, config)
    value, err = prof.metric()
    return DistResult(value, err, "quadrature", prof.stable)


def dist(instance: ComplexInstance, p: FlowPoint, q: FlowPoint,
         config: FSConfig = DEFAULT_CONFIG) -> float:
    return dist_info(instance, p, q, config).value


# ---------------------------------------------------------------------------
# group action, iota and j
# ---------------------------------------------------------------------------


def isometry_action(instance: ComplexInstance, g: Word, p: FlowPoint) -> FlowPoint:
    """The induced isometry: (a,b,t) -> (g a, g b, t + <a,b|x0,g^{-1} x0>)."""
    from .words import invert

    if p.at_vertex:
        return at_vertex(instance.act(g, p.vertex))
    x0 = instance.base_point
    g_inv_x0 = instance.check_vertex(invert(g))
    shift = instance.double_difference(p.a, p.b, x0, g_inv_x0)
    return make_point(
        instance, instance.act(g, p.a), instance.act(g, p.b), p.t + shift
    )


def iota(instance: ComplexInstance, a: Word, c: PointBar,
         tol: float = 1e-12) -> FlowPoint:
    """The section X x Xbar -> FS sending (a, c) to the point on the line
    (a, c) at distance min{2, dhat(a,c)/2} (interior c) or 2 (boundary c)
    from the vertex a."""
    instance.check_vertex(a)
    c = instance.check_point(c)
    if is_interior(c) and a == c:
        return at_vertex(a)
    iv = line_interval(instance, a, c)
    alpha = iv.alpha  # = -<c|x0>_a, finite since a is interior
    if is_interior(c):
        target = min(Fraction(2), instance.dhat(a, c) / 2) + alpha.value
    else:
        target = 2 + alpha.value
    t = Theta_inverse(iv, ExtReal.of(target), tol)
    return make_point(instance, a, c, float(t))


def j_map(instance: ComplexInstance, g: Word, c: PointBar,
          tol: float = 1e-12) -> FlowPoint:
    """iota based at the orbit point g x0."""
    gx0 = instance.check_vertex(g)
    return iota(instance, gx0, c, tol)


def iota_time(instance: ComplexInstance, a: Word, c: PointBar,
              tol: float = 1e-12):
    """The time coordinate used by iota (0 for a = c, matching the
    convention <a,c|b,x0> = 0 there)."""
    p = iota(instance, a, c, tol)
    if p.at_vertex:
        return Fraction(0)
    return p.t
