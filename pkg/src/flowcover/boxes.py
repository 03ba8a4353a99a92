"""Boxes in coordinate flow models.

A flow model is a list of components: translation components (slice x R,
flow shifts time, optionally with a time lattice in the symmetry group),
stationary components (flow fixes everything), and periodic components
(slice x circle).  Boxes are graphs of piecewise-linear height functions
over closed slice regions, thickened by half the length both ways; all
data is rational, so membership, entry/exit times, restriction and gap
checks are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .extreal import ExtReal, POS_INF
from .slice1d import ArcSet, Piece, Slice1D, SliceAction, SliceMap, \
    trivial_slice_action


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Height:
    """A piecewise-linear function of the slice coordinate.

    ``breaks`` is a tuple of (x, y) pairs with strictly increasing x; the
    function is affine between breakpoints.  ``breaks = None`` means the
    constant ``value`` (defined on the whole slice, circles included).
    """

    value: Fraction = Fraction(0)
    breaks: Optional[Tuple[Tuple[Fraction, Fraction], ...]] = None

    @staticmethod
    def constant(v) -> "Height":
        return Height(Fraction(v), None)

    @staticmethod
    def piecewise(points: Sequence[Tuple]) -> "Height":
        pts = tuple((Fraction(x), Fraction(y)) for x, y in points)
        if len(pts) < 2:
            raise ValueError("need at least two breakpoints")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise ValueError("breakpoints must increase")
        return Height(Fraction(0), pts)

    @property
    def is_constant(self) -> bool:
        return self.breaks is None

    def domain(self) -> Optional[Tuple[Fraction, Fraction]]:
        if self.breaks is None:
            return None
        return self.breaks[0][0], self.breaks[-1][0]

    def at(self, x) -> Fraction:
        x = Fraction(x)
        if self.breaks is None:
            return self.value
        pts = self.breaks
        if x < pts[0][0] or x > pts[-1][0]:
            raise ValueError("coordinate outside the height's domain")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 <= x <= x1:
                if x == x0:
                    return y0
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return pts[-1][1]

    def shift(self, dt) -> "Height":
        dt = Fraction(dt)
        if self.breaks is None:
            return Height(self.value + dt, None)
        return Height(Fraction(0),
                      tuple((x, y + dt) for x, y in self.breaks))

    def range_over(self, arcs: ArcSet) -> Tuple[Fraction, Fraction]:
        """Exact (min, max) over a closed arc set (PL: extrema at
        breakpoints and piece endpoints)."""
        if self.breaks is None:
            return self.value, self.value
        xs: List[Fraction] = []
        for p in arcs.pieces:
            xs.append(p.lo)
            xs.append(p.hi)
            for x, _ in self.breaks:
                if p.lo <= x <= p.hi:
                    xs.append(x)
        vals = [self.at(x) for x in xs]
        return min(vals), max(vals)

    def max_slope(self) -> Fraction:
        if self.breaks is None:
            return Fraction(0)
        out = Fraction(0)
        for (x0, y0), (x1, y1) in zip(self.breaks, self.breaks[1:]):
            s = abs(y1 - y0) / (x1 - x0)
            if s > out:
                out = s
        return out

    def pull_back(self, m: SliceMap, slice_: Slice1D) -> "Height":
        """The height x -> h(m^{-1} x) (constant heights are unchanged)."""
        if self.breaks is None:
            return self
        inv = m.inverse(slice_)
        pts = sorted(
            ((m.apply(slice_, x), y) for x, y in self.breaks),
            key=lambda t: t[0],
        )
        return Height.piecewise(pts)


def common_breakpoints(heights: Sequence[Height]) -> List[Fraction]:
    xs = set()
    for h in heights:
        if h.breaks is not None:
            xs.update(x for x, _ in h.breaks)
    return sorted(xs)


def average_heights(heights: Sequence[Height]) -> Height:
    """Pointwise mean on the common refinement."""
    if not heights:
        raise ValueError("nothing to average")
    if all(h.is_constant for h in heights):
        return Height.constant(sum(h.value for h in heights)
                               / len(heights))
    xs = common_breakpoints(heights)
    doms = [h.domain() for h in heights if h.domain() is not None]
    lo = max(d[0] for d in doms)
    hi = min(d[1] for d in doms)
    grid = sorted({lo, hi, *[x for x in xs if lo <= x <= hi]})
    pts = [(x, sum(h.at(x) for h in heights) / len(heights)) for x in grid]
    return Height.piecewise(pts)


def equivariant_average(action: SliceAction, heights: Dict) -> Tuple[Height, bool]:
    """Average a family of slice heights indexed by group elements and
    verify the averaged graph is invariant (checked at breakpoints and
    their images)."""
    avg = average_heights([heights[g] for g in sorted(heights, key=repr)])
    invariant = True
    probe: List[Fraction] = []
    if avg.breaks is None:
        probe = [Fraction(0), action.slice.length / 3]
    else:
        probe = [x for x, _ in avg.breaks]
    for g in heights:
        for x in probe:
            gx = action.apply_point(g, x)
            try:
                if avg.at(gx) != avg.at(x):
                    invariant = False
            except ValueError:
                invariant = False
    return avg, invariant


# ---------------------------------------------------------------------------
# flow models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """One piece of a flow model.

    kind = "translation": slice x R; optional ``lattice`` makes time shift
    by ``lattice`` (composed with ``lattice_map`` on the slice) a symmetry.
    kind = "stationary": the flow fixes every point of the slice.
    kind = "periodic": slice x (R mod ``circle``); an optional rotation of
    order ``rotation_order`` divides the period.
    """

    kind: str
    slice: Slice1D
    action: SliceAction
    lattice: Optional[Fraction] = None
    lattice_map: Optional[SliceMap] = None
    circle: Optional[Fraction] = None
    rotation_order: int = 1
    window: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))

    def __post_init__(self):
        if self.kind not in ("translation", "stationary", "periodic"):
            raise ModelError(f"unknown component kind {self.kind!r}")
        if self.kind == "periodic" and (self.circle is None or self.circle <= 0):
            raise ModelError("periodic component needs a positive circle length")
        if self.lattice is not None and self.lattice <= 0:
            raise ModelError("lattice period must be positive")


@dataclass(frozen=True)
class FlowModel:
    components: Tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def component(self, i: int) -> Component:
        return self.components[i]


@dataclass(frozen=True)
class ModelPoint:
    component: int
    x: Fraction
    t: Fraction = Fraction(0)


def flow_point(model: FlowModel, p: ModelPoint, tau) -> ModelPoint:
    comp = model.component(p.component)
    tau = Fraction(tau)
    if comp.kind == "stationary":
        return p
    t = p.t + tau
    if comp.kind == "periodic":
        t %= comp.circle
    return ModelPoint(p.component, p.x, t)


def g_period(model: FlowModel, p: ModelPoint) -> ExtReal:
    """Infimal tau > 0 with flow_tau(p) in the symmetry orbit of p."""
    comp = model.component(p.component)
    if comp.kind == "stationary":
        return ExtReal(0)
    if comp.kind == "periodic":
        return ExtReal(Fraction(comp.circle, comp.rotation_order))
    if comp.lattice is None:
        return POS_INF
    lam = comp.lattice_map or SliceMap(1, Fraction(0))
    x = p.x
    n = 1
    while n <= 64:
        y = x
        for _ in range(n):
            y = lam.apply(comp.slice, y)
        if y == comp.slice.normalize(x):
            return ExtReal(n * comp.lattice)
        n += 1
    return POS_INF


# ---------------------------------------------------------------------------
# boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Graph of a height function over a closed slice region, thickened by
    length/2 along the flow."""

    component: int
    region: ArcSet        # closed
    height: Height
    length: Fraction

    def __post_init__(self):
        object.__setattr__(self, "length", Fraction(self.length))
        if self.length <= 0:
            raise ModelError("box length must be positive")
        if self.region.is_empty:
            raise ModelError("box region is empty")
        if self.region != self.region.closure():
            raise ModelError("box region must be closed")

    # -- geometry -----------------------------------------------------------
    def contains(self, p: ModelPoint) -> bool:
        if p.component != self.component:
            return False
        if not self.region.contains(p.x):
            return False
        h = self.height.at(p.x)
        return h - self.length / 2 <= p.t <= h + self.length / 2

    def open_region(self) -> ArcSet:
        return self.region.interior()

    def interior_contains(self, p: ModelPoint) -> bool:
        if p.component != self.component:
            return False
        if not self.open_region().contains(p.x):
            return False
        h = self.height.at(p.x)
        return h - self.length / 2 < p.t < h + self.length / 2

    def bottom_at(self, x) -> Fraction:
        return self.height.at(x) - self.length / 2

    def top_at(self, x) -> Fraction:
        return self.height.at(x) + self.length / 2

    def time_range(self, arcs: Optional[ArcSet] = None) -> Tuple[Fraction, Fraction]:
        lo, hi = self.height.range_over(arcs or self.region)
        return lo - self.length / 2, hi + self.length / 2

    def translate_time(self, dt) -> "Box":
        return Box(self.component, self.region, self.height.shift(dt),
                   self.length)

    def apply_slice_map(self, m: SliceMap, slice_: Slice1D) -> "Box":
        return Box(self.component, m.apply_set(self.region),
                   self.height.pull_back(m, slice_), self.length)


def a_pm(model: FlowModel, box: Box, p: ModelPoint) -> Tuple[Fraction, Fraction]:
    """Entry and exit times (a-, a+) of the flow line through p: the flow
    stays in the box exactly for tau in [a-, a+]; a+ - a- = length, and
    flowing the point subtracts tau from both."""
    if not box.contains(p):
        raise ModelError("point is not in the box")
    h = box.height.at(p.x)
    return h - box.length / 2 - p.t, h + box.length / 2 - p.t


def box_in_interior(inner: Box, outer: Box) -> bool:
    """Whether the closed inner box lies in the topological interior of
    the outer one (exact: extrema of PL height differences are attained
    at breakpoints and piece endpoints)."""
    if inner.component != outer.component:
        return False
    if not outer.region.interior().contains_set(inner.region):
        return False
    xs: List[Fraction] = []
    for p in inner.region.pieces:
        xs.extend((p.lo, p.hi))
        for h in (inner.height, outer.height):
            if h.breaks is not None:
                xs.extend(x for x, _ in h.breaks if p.lo <= x <= p.hi)
    for x in xs:
        if not (outer.bottom_at(x) < inner.bottom_at(x)
                and inner.top_at(x) < outer.top_at(x)):
            return False
    return True


def boxes_meet(b1: Box, b2: Box) -> bool:
    """Whether two closed boxes intersect (exact for constant heights; a
    conservative range test otherwise)."""
    if b1.component != b2.component:
        return False
    common = b1.region.intersect(b2.region)
    if common.is_empty:
        return False
    if b1.height.is_constant and b2.height.is_constant:
        lo1, hi1 = b1.time_range()
        lo2, hi2 = b2.time_range()
        return hi1 >= lo2 and hi2 >= lo1
    lo1, hi1 = b1.time_range(common)
    lo2, hi2 = b2.time_range(common)
    return hi1 >= lo2 and hi2 >= lo1


def restrict(box: Box, V: ArcSet, a, b) -> Box:
    """The sub-box over a closed subset V of the central slice, spanning
    flow times [a, b] from the slice: bottom = graph(h + a),
    top = graph(h + b), central slice graph(h + (a+b)/2)."""
    a = Fraction(a)
    b = Fraction(b)
    if not (-box.length / 2 <= a < b <= box.length / 2):
        raise ModelError("need -l/2 <= a < b <= l/2")
    if V.is_empty:
        raise ModelError("restriction to the empty set")
    if V != V.closure():
        raise ModelError("restriction set must be closed")
    if not box.region.contains_set(V):
        raise ModelError("restriction set must lie in the central slice")
    return Box(box.component, V, box.height.shift((a + b) / 2), b - a)


@dataclass(frozen=True)
class SlicePatch:
    """A candidate slice piece inside a box: over ``arcs``, the time span
    [t_lo(x), t_hi(x)]."""

    arcs: ArcSet
    t_lo: Height
    t_hi: Height


def transversality_check(patches: Sequence[SlicePatch], box: Box) -> bool:
    """True iff the union of the patches meets every flow fiber of the box
    in at most one point."""
    for patch in patches:
        for piece in patch.arcs.pieces:
            xs = {piece.lo, piece.hi}
            for h in (patch.t_lo, patch.t_hi):
                if h.breaks is not None:
                    xs.update(x for x, _ in h.breaks
                              if piece.lo <= x <= piece.hi)
            for x in xs:
                if patch.t_lo.at(x) != patch.t_hi.at(x):
                    return False  # a vertical segment in the fiber
    for i, p1 in enumerate(patches):
        for p2 in patches[i + 1:]:
            overlap = p1.arcs.intersect(p2.arcs)
            if overlap.is_empty:
                continue
            for x in overlap.sample_points():
                if p1.t_lo.at(x) != p2.t_lo.at(x):
                    return False
    return True


# ---------------------------------------------------------------------------
# the nested triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxTriple:
    component: int
    center: Fraction
    inner: Box     # length a
    middle: Box    # length a + 2b
    outer: Box     # length a + 2b + 2c


@dataclass(frozen=True)
class TripleFamily:
    model: FlowModel
    a: Fraction
    b: Fraction
    c: Fraction
    triples: Tuple[BoxTriple, ...]
    windows: Dict[int, Tuple[Fraction, Fraction]]


def generate_triples(model: FlowModel, a, b, c,
                     windows: Optional[Dict[int, Tuple]] = None) -> TripleFamily:
    """Nested box triples A <= B <= C over the full slice of every
    translation component, centered on a time grid of spacing a/2 covering
    the component's window.  Requires c > a + 2b and a symmetry period
    exceeding a + 2b + 2c on every covered component."""
    a = Fraction(a)
    b = Fraction(b)
    c = Fraction(c)
    if not (a > 0 and b > 0 and c > 0 and c > a + 2 * b):
        raise ModelError("need a, b, c > 0 with c > a + 2b")
    gamma = a + 2 * b + 2 * c
    triples: List[BoxTriple] = []
    used_windows: Dict[int, Tuple[Fraction, Fraction]] = {}
    for idx, comp in enumerate(model.components):
        if comp.kind != "translation":
            continue
        window = (windows or {}).get(idx, comp.window)
        lo, hi = Fraction(window[0]), Fraction(window[1])
        period = g_period(model, ModelPoint(idx, Fraction(0)))
        if period.is_finite and period.value <= gamma:
            raise ModelError(
                f"component {idx}: symmetry period {period.value} does not "
                f"exceed a + 2b + 2c = {gamma}"
            )
        if comp.lattice is not None and hi - lo >= comp.lattice:
            raise ModelError("window must fit inside one lattice period")
        used_windows[idx] = (lo, hi)
        whole = comp.slice.whole()
        t = lo
        step = a / 2
        centers = []
        while t <= hi:
            centers.append(t)
            t += step
        if centers[-1] < hi:
            centers.append(hi)
        for t0 in centers:
            triples.append(BoxTriple(
                idx, t0,
                Box(idx, whole, Height.constant(t0), a),
                Box(idx, whole, Height.constant(t0), a + 2 * b),
                Box(idx, whole, Height.constant(t0), gamma),
            ))
    if not triples:
        raise ModelError("no translation component to cover")
    return TripleFamily(model, a, b, c, tuple(triples), used_windows)


def verify_triples(fam: TripleFamily) -> Dict[str, bool]:
    """Enumerated conclusions for the nested triples."""
    model = fam.model
    a, b, c = fam.a, fam.b, fam.c
    gamma = a + 2 * b + 2 * c
    out: Dict[str, bool] = {}
    out["cofinite"] = len(fam.triples) < math.inf
    out["lengths"] = all(
        t.inner.length == a and t.middle.length == a + 2 * b
        and t.outer.length == gamma for t in fam.triples
    )
    out["connected-outer-slice"] = all(
        len(t.outer.region.pieces) == 1 or t.outer.region.is_whole()
        for t in fam.triples
    )
    out["nested-slices"] = all(
        t.outer.region.contains_set(t.middle.region)
        and t.middle.region.contains_set(t.inner.region)
        for t in fam.triples
    )
    out["nested-interiors"] = all(
        box_in_interior(t.inner, t.middle) and
        box_in_interior(t.middle, t.outer)
        for t in fam.triples
    )

    covering = True
    for idx, (lo, hi) in fam.windows.items():
        opens: List[Tuple[Fraction, Fraction]] = []
        for t in fam.triples:
            if t.component != idx:
                continue
            blo, bhi = t.inner.time_range()
            opens.append((blo, bhi))
        covering &= _open_intervals_cover(opens, lo, hi)
    out["covering"] = covering

    equivariant = True
    for t in fam.triples:
        comp = model.component(t.component)
        for g in comp.action.elements:
            moved = t.outer.apply_slice_map(comp.action.maps[g], comp.slice)
            if moved.region != t.outer.region or moved.height != t.outer.height:
                equivariant = False
    out["equivariance"] = equivariant

    control = True
    for t1 in fam.triples:
        for t2 in fam.triples:
            if t1.component != t2.component:
                continue
            d = abs(t1.center - t2.center)
            lo1, hi1 = t1.middle.time_range()
            lo2, hi2 = t2.middle.time_range()
            if hi1 >= lo2 and hi2 >= lo1:  # middles meet
                clo, chi = t2.outer.time_range()
                if not (clo < lo1 and hi1 < chi):
                    control = False
                patch = SlicePatch(t1.middle.region, t1.middle.height,
                                   t1.middle.height)
                if not transversality_check([patch], t2.outer):
                    control = False
    out["intersection-control"] = control
    return out


def _open_intervals_cover(opens: Sequence[Tuple[Fraction, Fraction]],
                          lo: Fraction, hi: Fraction) -> bool:
    """Whether finitely many open intervals cover the closed [lo, hi]:
    sweep from lo, always jumping to the farthest reachable right end."""
    x = lo
    for _ in range(len(opens) + 2):
        if x > hi:
            return True
        reach = [ahi for alo, ahi in opens if alo < x < ahi]
        if not reach:
            return False
        x = max(reach)
    return x > hi
