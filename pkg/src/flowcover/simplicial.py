"""Finite simplicial complexes, subdivision, stars, nerves, and finite
group actions.

Simplices are frozensets of vertex ids.  Subdivision vertices are the
simplices they are barycenters of, and every vertex carries barycentric
coordinates with respect to the original complex (exact Fractions), which
is what the carrier map and the geometric metric read off.

Open subsets are unions of open simplices, stored as the upward-closed set
of simplices whose interiors belong to the region; interiors, closures and
boundaries are all combinatorial on that representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

Simplex = FrozenSet


def _downward_closure(simplices: Iterable[Simplex]) -> set:
    out = set()
    for s in simplices:
        items = sorted(s)
        n = len(items)
        for r in range(1, n + 1):
            for face in itertools.combinations(items, r):
                out.add(frozenset(face))
    return out


class SComplex:
    """A finite simplicial complex with optional vertex metric.

    ``positions`` maps each vertex to exact barycentric coordinates over
    the vertices of the complex it was subdivided from (the identity for a
    base complex); ``metric`` maps frozenset({u, v}) to a Fraction.
    """

    def __init__(self, maximal_simplices: Sequence[Iterable],
                 metric: Optional[Dict] = None,
                 positions: Optional[Dict] = None):
        maxs = [frozenset(s) for s in maximal_simplices]
        if any(not s for s in maxs):
            raise ValueError("simplices must be nonempty")
        self.simplices = _downward_closure(maxs)
        self.vertices = sorted({v for s in self.simplices for v in s},
                               key=repr)
        self._cofaces: Dict[Simplex, List[Simplex]] = {s: [] for s in self.simplices}
        for t in self.simplices:
            items = sorted(t)
            for r in range(1, len(items) + 1):
                for face in itertools.combinations(items, r):
                    self._cofaces[frozenset(face)].append(t)
        self.maximal = [s for s in self.simplices if len(self._cofaces[s]) == 1]
        self.positions = positions or {v: {v: Fraction(1)} for v in self.vertices}
        self.metric = metric

    # -- basics -------------------------------------------------------------
    def dim(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def has(self, s: Simplex) -> bool:
        return frozenset(s) in self.simplices

    def cofaces(self, s: Simplex) -> List[Simplex]:
        return self._cofaces[frozenset(s)]

    def simplex_count(self) -> int:
        return len(self.simplices)

    # -- geometry -----------------------------------------------------------
    def vertex_distance(self, u, v) -> Fraction:
        """Bilinear extension of the base metric to subdivision vertices."""
        if self.metric is None:
            raise ValueError("complex has no metric")
        if u == v:
            return Fraction(0)
        pu = self.positions[u]
        pv = self.positions[v]
        total = Fraction(0)
        for x, wx in pu.items():
            for y, wy in pv.items():
                if x != y:
                    total += wx * wy * self.metric[frozenset((x, y))]
        return total

    def simplex_diameter(self, s: Simplex) -> Fraction:
        vs = sorted(s, key=repr)
        best = Fraction(0)
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                d = self.vertex_distance(vs[i], vs[j])
                if d > best:
                    best = d
        return best

    def max_simplex_diameter(self) -> Fraction:
        return max((self.simplex_diameter(s) for s in self.simplices
                    if len(s) > 1), default=Fraction(0))

    def set_diameter(self, simplex_set: Iterable[Simplex]) -> Fraction:
        """Diameter of a union of simplices: the metric is bilinear in the
        barycentric coordinates, so the max is attained at vertex pairs."""
        vs = sorted({v for s in simplex_set for v in s}, key=repr)
        best = Fraction(0)
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                d = self.vertex_distance(vs[i], vs[j])
                if d > best:
                    best = d
        return best


def barycentric_subdivide(K: SComplex, rounds: int = 1) -> Tuple[SComplex, Dict]:
    """The iterated barycentric subdivision and its carrier map.

    New vertices are the simplices of the old complex; new maximal
    simplices are the maximal flags of old simplices.  The carrier map
    sends each new simplex to the smallest base simplex containing it
    (the union of the coordinate supports of its barycenters).
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    current = K
    for _ in range(rounds):
        current = _subdivide_once(current)
    carrier = {
        s: frozenset().union(*(K_support(current, v) for v in s))
        for s in current.simplices
    }
    return current, carrier


def K_support(K: SComplex, v) -> FrozenSet:
    """Support of a vertex in the base complex (keys of its coordinates)."""
    return frozenset(K.positions[v].keys())


def _subdivide_once(K: SComplex) -> SComplex:
    new_max = [frozenset(flag) for s in K.maximal for flag in _full_flags(s)]
    positions = {}
    for s in K.simplices:
        coords: Dict = {}
        n = len(s)
        for v in s:
            for base, w in K.positions[v].items():
                coords[base] = coords.get(base, Fraction(0)) + Fraction(w, n)
        positions[s] = coords
    return SComplex(new_max, metric=K.metric, positions=positions)


def _full_flags(top: Simplex) -> Iterable[Tuple]:
    """All maximal chains of faces of ``top`` (one per vertex ordering)."""
    items = sorted(top, key=repr)
    for perm in itertools.permutations(items):
        chain = []
        acc: set = set()
        for v in perm:
            acc.add(v)
            chain.append(frozenset(acc))
        yield tuple(chain)


# ---------------------------------------------------------------------------
# open regions: unions of open simplices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpenRegion:
    """An open subset of a complex: an upward-closed set of simplices,
    meaning the union of their simplicial interiors."""

    complex: SComplex
    simplices: FrozenSet

    def __post_init__(self):
        for s in self.simplices:
            for t in self.complex.cofaces(s):
                if t not in self.simplices:
                    raise ValueError("region is not upward closed (not open)")

    @staticmethod
    def trusted(complex_: SComplex, simplices: FrozenSet) -> "OpenRegion":
        """Internal constructor for sets already known upward-closed."""
        out = object.__new__(OpenRegion)
        object.__setattr__(out, "complex", complex_)
        object.__setattr__(out, "simplices", frozenset(simplices))
        return out

    @property
    def empty(self) -> bool:
        return not self.simplices

    def closure(self) -> FrozenSet:
        """The subcomplex (set of simplices) underlying the closure."""
        return frozenset(_downward_closure(self.simplices))

    def boundary(self) -> FrozenSet:
        """Closure minus region, as the set of open simplices it contains;
        this set is downward... stored as all simplices of the boundary
        subcomplex."""
        cl = self.closure()
        return frozenset(_downward_closure(
            {s for s in cl if s not in self.simplices}
        ))

    def intersect(self, other: "OpenRegion") -> "OpenRegion":
        return OpenRegion.trusted(self.complex,
                                  self.simplices & other.simplices)

    def union(self, other: "OpenRegion") -> "OpenRegion":
        return OpenRegion.trusted(self.complex,
                                  self.simplices | other.simplices)

    def contains_region(self, other: "OpenRegion") -> bool:
        return other.simplices <= self.simplices

    def meets(self, other: "OpenRegion") -> bool:
        return bool(self.simplices & other.simplices)

    def meets_subcomplex(self, sub: FrozenSet) -> bool:
        """Whether the open region meets the closed point set |sub|: an
        open simplex of the region lies in |sub| iff it is in sub, and
        touches it iff one of its faces... point sets intersect iff they
        share an open simplex; |sub| contains the interiors of exactly its
        own simplices."""
        return any(s in sub for s in self.simplices)

    def diameter(self) -> Fraction:
        return self.complex.set_diameter(self.closure())

    def translate(self, mapping: Dict) -> "OpenRegion":
        return OpenRegion.trusted(self.complex,
                                  frozenset(frozenset(mapping[v] for v in s)
                                            for s in self.simplices))


def interior_of_subcomplex(K: SComplex, sub: Iterable[Simplex]) -> OpenRegion:
    """The topological interior of a subcomplex: the open simplices all of
    whose cofaces stay in the subcomplex.  Interiors of closed sets are
    regular open, so these regions satisfy V = int(closure(V))."""
    subset = frozenset(sub)
    keep = {s for s in subset if all(t in subset for t in K.cofaces(s))}
    return OpenRegion.trusted(K, frozenset(keep))


def open_star(K: SComplex, v) -> OpenRegion:
    """The open star of a vertex: all simplices containing it."""
    key = v
    return OpenRegion.trusted(K, frozenset(s for s in K.simplices
                                           if key in s))


def star_prime(K: SComplex, sigma: Simplex,
               subdivision: Optional[SComplex] = None) -> OpenRegion:
    """The open star, in the first subdivision, of the barycenter of a
    simplex of K."""
    s = frozenset(sigma)
    if not K.has(s):
        raise ValueError("simplex not in the complex")
    if subdivision is None:
        subdivision, _ = barycentric_subdivide(K, 1)
    return open_star(subdivision, s)


def largest_subcomplex_inside(K: SComplex, region: OpenRegion) -> FrozenSet:
    """The largest subcomplex of K whose realization lies in the open
    region: simplices whose closed faces all belong to the region."""
    keep = set()
    for s in K.simplices:
        faces = _downward_closure([s])
        if all(f in region.simplices for f in faces):
            keep.add(s)
    return frozenset(_downward_closure(keep))


# ---------------------------------------------------------------------------
# finite group actions
# ---------------------------------------------------------------------------


class FiniteAction:
    """A finite group acting simplicially: elements are hashable labels,
    each with a vertex permutation; composition is table-driven."""

    def __init__(self, K: SComplex, permutations: Dict):
        self.K = K
        self.permutations = {g: dict(p) for g, p in permutations.items()}
        self.elements = sorted(self.permutations.keys(), key=repr)
        self._check()

    def _check(self):
        for g, p in self.permutations.items():
            if sorted(p.keys(), key=repr) != self.K.vertices:
                raise ValueError(f"permutation of {g} is not on the vertex set")
            for s in self.K.simplices:
                if frozenset(p[v] for v in s) not in self.K.simplices:
                    raise ValueError(f"element {g} does not act simplicially")
        # closure under composition
        for g in self.elements:
            for h in self.elements:
                comp = self.compose_maps(g, h)
                if not any(self.permutations[e] == comp for e in self.elements):
                    raise ValueError("permutations are not closed under composition")

    def compose_maps(self, g, h) -> Dict:
        pg, ph = self.permutations[g], self.permutations[h]
        return {v: pg[ph[v]] for v in self.K.vertices}

    def order(self) -> int:
        return len(self.elements)

    def apply_vertex(self, g, v):
        return self.permutations[g][v]

    def apply_simplex(self, g, s: Simplex) -> Simplex:
        p = self.permutations[g]
        return frozenset(p[v] for v in s)

    def apply_region(self, g, region: OpenRegion) -> OpenRegion:
        return OpenRegion.trusted(region.complex,
                                  frozenset(self.apply_simplex(g, s)
                                            for s in region.simplices))

    def is_isometric(self) -> bool:
        K = self.K
        if K.metric is None:
            return True
        for g in self.elements:
            p = self.permutations[g]
            for pair, d in K.metric.items():
                u, v = tuple(pair)
                if K.metric[frozenset((p[u], p[v]))] != d:
                    return False
        return True

    def lift(self, sub: SComplex) -> "FiniteAction":
        """The induced action on the immediate barycentric subdivision,
        whose vertices are the simplices of this complex."""
        perms = {}
        for g in self.elements:
            p = self.permutations[g]
            perms[g] = {v: frozenset(p[x] for x in v) for v in sub.vertices}
        return FiniteAction(sub, perms)


def trivial_action(K: SComplex) -> FiniteAction:
    return FiniteAction(K, {"e": {v: v for v in K.vertices}})


# ---------------------------------------------------------------------------
# nerves and the nerve map
# ---------------------------------------------------------------------------


def _nerve_from_supports(supports: Sequence[frozenset]) -> SComplex:
    """Nerve of indexed sets: grow tuples whose intersection is nonempty."""
    n = len(supports)
    simplices = []
    stack = [((i,), supports[i]) for i in range(n) if supports[i]]
    while stack:
        combo, inter = stack.pop()
        simplices.append(frozenset(combo))
        for j in range(combo[-1] + 1, n):
            nxt = inter & supports[j]
            if nxt:
                stack.append((combo + (j,), nxt))
    if not simplices:
        raise ValueError("empty cover has no nerve")
    return SComplex(simplices)


def nerve_of_regions(cover: Sequence[OpenRegion]) -> SComplex:
    """One vertex per member, a simplex per nonempty intersection."""
    return _nerve_from_supports([r.simplices for r in cover])


def nerve_of_sets(cover: Sequence[frozenset]) -> SComplex:
    return _nerve_from_supports([frozenset(s) for s in cover])


def nerve_map_weights(points: Sequence, metric, cover: Sequence[frozenset],
                      z) -> Dict[int, Fraction]:
    """Barycentric weights of the partition-of-unity map into the nerve:
    weight of member U at z is d(z, Z-U) / sum_V d(z, Z-V)."""
    dists = []
    for U in cover:
        comp = [w for w in points if w not in U]
        if not comp:
            d = max((metric(z, w) for w in points), default=Fraction(1))
            d = d if d > 0 else Fraction(1)
        else:
            d = min(metric(z, w) for w in comp)
        dists.append(d)
    total = sum(dists)
    if total == 0:
        raise ValueError("point is not covered")
    return {i: Fraction(d, 1) / total for i, d in enumerate(dists) if d > 0}
