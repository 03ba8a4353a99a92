"""General position for open regions of finite complexes with finite
group actions: equivariant shrinks with controlled boundary overlap, and
layered small covers built from stars of iterated subdivisions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .simplicial import (
    FiniteAction,
    OpenRegion,
    SComplex,
    _downward_closure,
    barycentric_subdivide,
    interior_of_subcomplex,
    largest_subcomplex_inside,
    nerve_map_weights,
    open_star,
    star_prime,
)


class ConstructionError(RuntimeError):
    """A search budget was exhausted before the construction succeeded."""


class Tower:
    """A chain of barycentric subdivisions of one base complex, with the
    lifted group action and region refinement across levels."""

    def __init__(self, base: SComplex, action: Optional[FiniteAction] = None,
                 max_level: int = 10):
        self.levels = [base]
        self.actions = [action]
        self.max_level = max_level

    def complex_at(self, level: int) -> SComplex:
        while len(self.levels) <= level:
            if len(self.levels) > self.max_level:
                raise ConstructionError("subdivision budget exhausted")
            nxt, _ = barycentric_subdivide(self.levels[-1], 1)
            self.levels.append(nxt)
            act = self.actions[-1]
            self.actions.append(act.lift(nxt) if act is not None else None)
        return self.levels[level]

    def action_at(self, level: int) -> Optional[FiniteAction]:
        self.complex_at(level)
        return self.actions[level]

    def level_of(self, K: SComplex) -> int:
        for i, L in enumerate(self.levels):
            if L is K:
                return i
        raise ValueError("complex does not belong to this tower")

    # -- refinement ---------------------------------------------------------
    def _parent_carrier(self, level: int, simplex: FrozenSet) -> FrozenSet:
        """Carrier of a level-``level`` simplex in level ``level - 1``:
        its vertices are simplices of the previous level."""
        return frozenset().union(*simplex)

    def refine_region(self, region: OpenRegion, src: int, dst: int) -> OpenRegion:
        """Express an open region at a deeper level (same point set)."""
        if dst < src:
            raise ValueError("can only refine downwards the tower")
        simplices = region.simplices
        for level in range(src + 1, dst + 1):
            K = self.complex_at(level)
            simplices = frozenset(
                s for s in K.simplices
                if self._parent_carrier(level, s) in simplices
            )
        return OpenRegion.trusted(self.complex_at(dst), simplices)

    def refine_subcomplex(self, sub: FrozenSet, src: int, dst: int) -> FrozenSet:
        """Express a closed subcomplex at a deeper level (same point set):
        all simplices whose carrier chain stays inside the subcomplex."""
        if dst < src:
            raise ValueError("can only refine downwards the tower")
        current = frozenset(sub)
        for level in range(src + 1, dst + 1):
            K = self.complex_at(level)
            current = frozenset(
                s for s in K.simplices
                if self._parent_carrier(level, s) in current
            )
        return current


# ---------------------------------------------------------------------------
# equivariant general-position shrink
# ---------------------------------------------------------------------------


@dataclass
class ShrinkResult:
    tower: Tower
    level_of: Dict[int, int]          # member index -> tower level of U'_i
    shrunk: Dict[int, OpenRegion]     # member index -> U'_i
    threshold: int                    # no point lies in more than this many
                                      # of the shrunk boundaries
    upp_level: int = 0


def _orbit_partition(action: Optional[FiniteAction],
                     regions: Sequence[OpenRegion]) -> List[List[int]]:
    """Partition member indices into orbits of the induced index action."""
    n = len(regions)
    if action is None:
        return [[i] for i in range(n)]
    index_of = {}
    for i, r in enumerate(regions):
        index_of.setdefault(r.simplices, i)
    seen = set()
    orbits = []
    for i in range(n):
        if i in seen:
            continue
        orbit = set()
        for g in action.elements:
            moved = action.apply_region(g, regions[i]).simplices
            if moved not in index_of:
                raise ValueError("the action does not permute the members")
            orbit.add(index_of[moved])
        orbits.append(sorted(orbit))
        seen |= orbit
    return orbits


def shrink_general_position(K: SComplex, action: Optional[FiniteAction],
                            u_list: Sequence[OpenRegion],
                            upp_list: Sequence[OpenRegion],
                            max_level: int = 10,
                            upp_level: int = 0,
                            tower: Optional[Tower] = None) -> ShrinkResult:
    """Equivariantly shrink each open member U to U' with

        U'' <= closure(U'') <= U' <= closure(U') <= U,

    such that no point lies in more than dim(K) of the shrunk boundaries
    (hence in more than (dim K + 1) |F| of them), and (gU)' = g(U').

    Per orbit the shrink takes the interior of the largest subcomplex of a
    staggered subdivision level contained in U; staggering the level by
    orbit makes intersections of boundaries drop in dimension.
    """
    if len(u_list) != len(upp_list):
        raise ValueError("need one inner region per member")
    if tower is None:
        tower = Tower(K, action, max_level=max_level)
    for u, upp in zip(u_list, upp_list):
        # precondition: closure(U'') inside U as point sets
        u_at = tower.refine_region(u, 0, upp_level)
        if not all(c in u_at.simplices for c in upp.closure()):
            raise ValueError("closure of inner region escapes its member")
    orbits = _orbit_partition(action, u_list)

    # base level: simplices meeting closure(U'') must lie inside U
    base = max(1, upp_level)
    while True:
        ok = True
        for u, upp in zip(u_list, upp_list):
            u_ref = tower.refine_region(u, 0, base)
            upp_cl = tower.refine_subcomplex(upp.closure(), upp_level, base)
            Kb = tower.complex_at(base)
            for s in Kb.simplices:
                faces = frozenset(_downward_closure([s]))
                if faces & upp_cl and not faces <= u_ref.simplices:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            break
        base += 1
        if base > max_level:
            raise ConstructionError("no subdivision level separates the inner "
                                    "regions from the member boundaries")

    shrunk: Dict[int, OpenRegion] = {}
    level_of: Dict[int, int] = {}
    for rank, orbit in enumerate(orbits, start=1):
        level = base + rank
        Klev = tower.complex_at(level)
        rep = orbit[0]
        u_ref = tower.refine_region(u_list[rep], 0, level)
        A = largest_subcomplex_inside(Klev, u_ref)
        shrunk_rep = interior_of_subcomplex(Klev, A)
        act = tower.action_at(level)
        for i in orbit:
            if i == rep or act is None:
                shrunk[i] = shrunk_rep
            else:
                g = _element_mapping(action, u_list, rep, i)
                shrunk[i] = tower.action_at(level).apply_region(g, shrunk_rep)
            level_of[i] = level
    return ShrinkResult(tower, level_of, shrunk, threshold=K.dim(),
                        upp_level=upp_level)


def _faces_in(region: OpenRegion, simplex: FrozenSet) -> bool:
    return simplex in region.simplices


def _element_mapping(action: FiniteAction, regions: Sequence[OpenRegion],
                     src: int, dst: int):
    for g in action.elements:
        if action.apply_region(g, regions[src]).simplices == regions[dst].simplices:
            return g
    raise ValueError("members are not in one orbit")


def verify_shrink(result: ShrinkResult, u_list: Sequence[OpenRegion],
                  upp_list: Sequence[OpenRegion],
                  action: Optional[FiniteAction],
                  threshold: Optional[int] = None) -> Dict[str, bool]:
    """Enumerated conclusions: sandwich containments, bounded boundary
    overlap, equivariance."""
    tower = result.tower
    deepest = max(result.level_of.values(), default=1)
    sandwich = True
    for i, (u, upp) in enumerate(zip(u_list, upp_list)):
        lev = result.level_of[i]
        up = result.shrunk[i]
        u_ref = tower.refine_region(u, 0, lev)
        upp_ref = tower.refine_region(upp, result.upp_level, lev)
        upp_cl = tower.refine_subcomplex(upp.closure(), result.upp_level, lev)
        up_cl = up.closure()
        if not upp_ref.simplices <= up.simplices:
            sandwich = False
        if not upp_cl <= up.simplices:
            sandwich = False
        if not all(s in u_ref.simplices for s in up_cl):
            sandwich = False
    if threshold is None:
        threshold = result.threshold
    boundaries = []
    for i in result.shrunk:
        lev = result.level_of[i]
        b = result.shrunk[i].boundary()
        boundaries.append(tower.refine_subcomplex(b, lev, deepest))
    overlap_ok = True
    Kdeep = tower.complex_at(deepest)
    for s in Kdeep.simplices:
        count = sum(1 for b in boundaries if s in b)
        if count > threshold:
            overlap_ok = False
            break
    equivariant = True
    if action is not None:
        index_of = {u_list[i].simplices: i for i in range(len(u_list))}
        for g in action.elements:
            for i in range(len(u_list)):
                j = index_of[action.apply_region(g, u_list[i]).simplices]
                lev = result.level_of[i]
                if result.level_of[j] != lev:
                    equivariant = False
                    continue
                moved = tower.action_at(lev).apply_region(g, result.shrunk[i])
                if moved.simplices != result.shrunk[j].simplices:
                    equivariant = False
    return {
        "sandwich": sandwich,
        "boundary-overlap": overlap_ok,
        "equivariance": equivariant,
    }


# ---------------------------------------------------------------------------
# layered small covers
# ---------------------------------------------------------------------------


@dataclass
class SmallCover:
    tower: Tower
    level: int                 # level of the member regions
    star_level: int            # level whose stars seeded the layers
    layers: List[List[OpenRegion]]
    layer_of_star: Dict[FrozenSet, int]


def build_small_cover(K: SComplex, action: Optional[FiniteAction],
                      y_region: Optional[OpenRegion],
                      u_list: Sequence[OpenRegion], k: int,
                      delta: Fraction, max_level: int = 9) -> SmallCover:
    """A layered open cover with small members and controlled contact with
    the given collection, built from shrunk stars of a fine subdivision.

    Layer j consists of shrunk stars (in the next subdivision) of the
    barycenters of j-simplices; members of one layer have disjoint
    closures, each member meets few earlier-layer members (a j-simplex has
    2^{j+1} - 2 proper faces), and each member is regular open.
    """
    if K.metric is None:
        raise ValueError("the complex needs a metric to bound diameters")
    tower = Tower(K, action, max_level=max_level)
    group_order = action.order() if action is not None else 1

    # choose the star level: stars must be delta/|F| small, meet at most k
    # member boundaries, and respect the Y-condition
    u_bound = [u.boundary() for u in u_list]
    u_close = [u.closure() for u in u_list]
    s_level = 1
    while True:
        Ks = tower.complex_at(s_level)
        bounds = [tower.refine_subcomplex(b, 0, s_level) for b in u_bound]
        closes = [tower.refine_subcomplex(c, 0, s_level) for c in u_close]
        y_ref = (tower.refine_region(y_region, 0, s_level)
                 if y_region is not None else None)
        ok = True
        for v in Ks.vertices:
            st = open_star(Ks, v)
            if st.diameter() * group_order >= delta:
                ok = False
                break
            hits = sum(1 for b in bounds if any(s in b for s in st.simplices))
            if hits > k:
                ok = False
                break
            if y_ref is not None:
                touches = any(
                    any(s in c for s in st.simplices) for c in closes
                )
                if touches:
                    st_cl = st.closure()
                    if not all(s in y_ref.simplices for s in st.simplices):
                        ok = False
                        break
        if ok:
            break
        s_level += 1
        if s_level > max_level - 2:
            raise ConstructionError("no subdivision level yields small stars")

    Ks = tower.complex_at(s_level)

    # shrink each star'(sigma) to a regular-open subcomplex interior at a
    # deeper level, keeping the covering property
    shrink = 1
    while True:
        deep_level = s_level + 1 + shrink
        deep = tower.complex_at(deep_level)
        # ancestor at level s_level + 1 of every deep simplex via chained
        # parent carriers; a deep simplex belongs to the refined star of
        # sigma iff sigma is a vertex of its ancestor
        member_raw: Dict[FrozenSet, set] = {sigma: set()
                                            for sigma in Ks.simplices}
        for D in deep.simplices:
            anc = D
            for level in range(deep_level, s_level + 1, -1):
                anc = frozenset().union(*anc)
            for sigma in anc:
                member_raw[sigma].add(D)
        layers: List[List[OpenRegion]] = [[] for _ in range(K.dim() + 1)]
        layer_of_star: Dict[FrozenSet, int] = {}
        covered: set = set()
        good = True
        for sigma in Ks.simplices:
            raw = member_raw[sigma]
            A = {s for s in raw
                 if all(f in raw for f in _downward_closure([s]))}
            member_set = {s for s in A
                          if all(t in A for t in deep.cofaces(s))}
            member = OpenRegion.trusted(deep, frozenset(member_set))
            if member.empty:
                good = False
                break
            layers[len(sigma) - 1].append(member)
            layer_of_star[sigma] = len(sigma) - 1
            covered |= member.simplices
        if good and covered == deep.simplices:
            return SmallCover(tower, deep_level, s_level, layers, layer_of_star)
        shrink += 1
        if s_level + 1 + shrink > max_level:
            raise ConstructionError("covering lost at every shrink depth")


def verify_small_cover(cover: SmallCover, u_list: Sequence[OpenRegion],
                       k: int, delta: Fraction,
                       action: Optional[FiniteAction]) -> Dict[str, bool]:
    """Enumerated conclusions of the layered cover construction."""
    tower = cover.tower
    deep = tower.complex_at(cover.level)
    group_order = action.order() if action is not None else 1
    ell = k * group_order
    members = [(j, m) for j, layer in enumerate(cover.layers) for m in layer]

    covered: set = set()
    for _, m in members:
        covered |= m.simplices
    covering = covered == deep.simplices

    diam_ok = all(m.diameter() < delta for _, m in members)

    u_ref = [tower.refine_region(u, 0, cover.level) for u in u_list]
    contact_ok = True
    for _, m in members:
        bad = 0
        for u in u_ref:
            if m.meets(u) and not u.contains_region(m):
                bad += 1
        if bad > ell:
            contact_ok = False
            break

    neighbor_ok = True
    for j, layer in enumerate(cover.layers):
        allowed = 2 ** (j + 1) - 2
        earlier = [m for jj in range(j + 1) for m in cover.layers[jj]]
        for m in layer:
            touches = sum(
                1 for other in earlier
                if other.simplices != m.simplices and m.meets(other)
            )
            if touches > allowed:
                neighbor_ok = False
                break

    disjoint_ok = True
    for layer in cover.layers:
        for m0, m1 in itertools.combinations(layer, 2):
            if m0.simplices == m1.simplices:
                continue
            if m0.closure() & m1.closure():
                disjoint_ok = False

    invariant_ok = True
    act = tower.action_at(cover.level)
    if act is not None:
        for layer in cover.layers:
            shapes = {m.simplices for m in layer}
            for g in act.elements:
                for m in layer:
                    if act.apply_region(g, m).simplices not in shapes:
                        invariant_ok = False

    regular_ok = all(
        interior_of_subcomplex(deep, m.closure()).simplices == m.simplices
        for _, m in members
    )

    return {
        "covering": covering,
        "small-diameter": diam_ok,
        "bounded-contact": contact_ok,
        "few-neighbors": neighbor_ok,
        "layer-disjoint": disjoint_ok,
        "layer-invariant": invariant_ok,
        "regular-open": regular_ok,
    }


# ---------------------------------------------------------------------------
# exhaustive structural checks
# ---------------------------------------------------------------------------


def check_subdivision_nesting(K: SComplex, m: int) -> bool:
    """In the m-th subdivision, base simplices whose interiors meet one
    subdivided simplex are nested.  Vertex supports suffice: carriers of
    faces are unions of vertex supports, which form a chain iff the
    supports do."""
    if m < 1:
        return True
    sub, _ = barycentric_subdivide(K, m)
    for D in sub.simplices:
        supports = [frozenset(sub.positions[v].keys()) for v in D]
        for s1, s2 in itertools.combinations(supports, 2):
            if not (s1 <= s2 or s2 <= s1):
                return False
    return True


def check_boundary_dim_drop(K: SComplex, b_sub: FrozenSet, m: int) -> bool:
    """Simplices of the m-th subdivision lying on the boundary of the
    largest subcomplex inside int(B) and inside a base simplex beta have
    dimension strictly below dim(beta)."""
    if m < 1:
        raise ValueError("need m >= 1")
    tower = Tower(K)
    sub = tower.complex_at(m)
    int_b = interior_of_subcomplex(K, b_sub)
    refined = tower.refine_region(int_b, 0, m)
    B0 = largest_subcomplex_inside(sub, refined)
    boundary = interior_of_subcomplex(sub, B0)
    boundary_set = B0 - frozenset(boundary.simplices)
    boundary_set = frozenset(_downward_closure(boundary_set)) if boundary_set \
        else frozenset()
    for sigma in boundary_set:
        carrier = frozenset().union(
            *(frozenset(sub.positions[v].keys()) for v in sigma)
        )
        for beta in K.simplices:
            if carrier <= beta:
                if len(sigma) - 1 >= len(beta) - 1:
                    return False
    return True


def check_thickening_inclusion(points: Sequence, metric, cover: Sequence[frozenset],
                               betas: Sequence[Fraction]) -> bool:
    """For the nerve map f of a finite metric cover and each member star U,
    every inward thickening (f^{-1}(U))^{-beta} admits alpha > 0 with
    (f^{-1}(U))^{-beta} inside f^{-1}(U^{-alpha}).

    With the half-l1 metric on the nerve, U^{-alpha} for the star of [V] is
    the set of nerve points with V-weight above alpha, so the check is that
    the minimal V-weight over the thickened preimage is positive.
    """
    for idx, member in enumerate(cover):
        pre = [z for z in points if z in member]
        comp = [z for z in points if z not in member]
        for beta in betas:
            thick = [
                z for z in pre
                if all(metric(z, w) > beta for w in comp)
            ]
            if not thick:
                continue
            weights = [
                nerve_map_weights(points, metric, cover, z).get(idx, Fraction(0))
                for z in thick
            ]
            if min(weights) <= 0:
                return False
    return True
