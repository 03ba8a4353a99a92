"""Exact one-dimensional slice geometry.

Slices of coordinate flow models are metric graphs realized as either a
circle of rational circumference or a segment [0, L].  Subsets are finite
unions of intervals with explicit open/closed endpoints, kept canonical
(sorted, disjoint, merged); all endpoints are Fractions, so interiors,
closures, insets and distances are exact.

Isometries of the slice are the maps x -> eps*x + c (eps = +-1), acting on
interval sets exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class Piece:
    """One interval [lo, hi] with endpoint-openness flags."""

    lo: Fraction
    hi: Fraction
    lo_open: bool
    hi_open: bool

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty piece")
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise ValueError("degenerate open piece")

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True


@dataclass(frozen=True)
class Slice1D:
    """A circle (wrap=True: coordinates mod length) or segment [0, length]."""

    length: Fraction
    wrap: bool = True

    def __post_init__(self):
        object.__setattr__(self, "length", Fraction(self.length))
        if self.length <= 0:
            raise ValueError("length must be positive")

    def normalize(self, x) -> Fraction:
        x = Fraction(x)
        if self.wrap:
            return x % self.length
        if not (0 <= x <= self.length):
            raise ValueError("coordinate outside the segment")
        return x

    def distance(self, x, y) -> Fraction:
        x = self.normalize(x)
        y = self.normalize(y)
        d = abs(x - y)
        if self.wrap:
            return min(d, self.length - d)
        return d

    def whole(self) -> "ArcSet":
        if self.wrap:
            return ArcSet(self, [Piece(Fraction(0), self.length, False, True)])
        return ArcSet(self, [Piece(Fraction(0), self.length, False, False)])


class ArcSet:
    """A canonical finite union of intervals of a slice.

    Circle sets are stored in fundamental-domain coordinates [0, L); a
    piece crossing 0 is split.  Canonical form merges touching pieces, so
    equality of sets is equality of piece lists (with the one convention
    that the full circle is [0, L) closed at 0).
    """

    def __init__(self, slice_: Slice1D, pieces: Iterable[Piece]):
        self.slice = slice_
        self.pieces = _canonical(slice_, list(pieces))

    # -- constructors -------------------------------------------------------
    @staticmethod
    def empty(slice_: Slice1D) -> "ArcSet":
        return ArcSet(slice_, [])

    @staticmethod
    def interval(slice_: Slice1D, lo, hi, lo_open: bool = False,
                 hi_open: bool = False) -> "ArcSet":
        """The arc from lo to hi (going upward; wraps on a circle)."""
        lo = Fraction(lo)
        hi = Fraction(hi)
        if hi < lo:
            return ArcSet.empty(slice_)
        if hi == lo:
            if lo_open or hi_open:
                return ArcSet.empty(slice_)
            if slice_.wrap:
                x = slice_.normalize(lo)
                return ArcSet(slice_, [Piece(x, x, False, False)])
            if 0 <= lo <= slice_.length:
                return ArcSet(slice_, [Piece(lo, lo, False, False)])
            return ArcSet.empty(slice_)
        if not slice_.wrap:
            lo2 = max(lo, Fraction(0))
            hi2 = min(hi, slice_.length)
            lo_open2 = lo_open if lo2 == lo else False
            hi_open2 = hi_open if hi2 == hi else False
            if lo2 > hi2 or (lo2 == hi2 and (lo_open2 or hi_open2)):
                return ArcSet.empty(slice_)
            return ArcSet(slice_, [Piece(lo2, hi2, lo_open2, hi_open2)])
        L = slice_.length
        if hi - lo > L or (hi - lo == L and not (lo_open and hi_open)):
            return slice_.whole()
        lo_m = lo % L
        hi_m = lo_m + (hi - lo)
        if hi_m <= L:
            return ArcSet(slice_, [Piece(lo_m, hi_m, lo_open, hi_open)])
        pieces = [Piece(lo_m, L, lo_open, True)]
        if hi_m - L > 0:
            pieces.append(Piece(Fraction(0), hi_m - L, False, hi_open))
        elif not hi_open:
            pieces.append(Piece(Fraction(0), Fraction(0), False, False))
        return ArcSet(slice_, pieces)

    # -- predicates ---------------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def is_whole(self) -> bool:
        return self.pieces == self.slice.whole().pieces

    def contains(self, x) -> bool:
        x = self.slice.normalize(x)
        return any(p.contains(x) for p in self.pieces)

    def __eq__(self, other):
        return isinstance(other, ArcSet) and self.slice == other.slice \
            and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.slice, tuple(self.pieces)))

    def __repr__(self):
        spans = ", ".join(
            f"{'(' if p.lo_open else '['}{p.lo},{p.hi}"
            f"{')' if p.hi_open else ']'}" for p in self.pieces
        )
        return f"ArcSet({spans})"

    # -- boolean algebra ------------------------------------------------------
    def complement(self) -> "ArcSet":
        out = self.slice.whole()
        for p in self.pieces:
            out = out._minus_piece(p)
        return out

    def _minus_piece(self, q: Piece) -> "ArcSet":
        new_pieces: List[Piece] = []
        for p in self.pieces:
            new_pieces.extend(_piece_difference(p, q))
        return ArcSet(self.slice, new_pieces)

    def union(self, other: "ArcSet") -> "ArcSet":
        return ArcSet(self.slice, self.pieces + other.pieces)

    def intersect(self, other: "ArcSet") -> "ArcSet":
        out: List[Piece] = []
        for p in self.pieces:
            for q in other.pieces:
                r = _piece_intersection(p, q)
                if r is not None:
                    out.append(r)
        return ArcSet(self.slice, out)

    def minus(self, other: "ArcSet") -> "ArcSet":
        out = self
        for q in other.pieces:
            out = out._minus_piece(q)
        return out

    def contains_set(self, other: "ArcSet") -> bool:
        return other.minus(self).is_empty

    def meets(self, other: "ArcSet") -> bool:
        return not self.intersect(other).is_empty

    # -- topology -------------------------------------------------------------
    def closure(self) -> "ArcSet":
        return ArcSet(self.slice, [Piece(p.lo, p.hi, False, False)
                                   for p in self.pieces])

    def interior(self) -> "ArcSet":
        """Interior within the slice (wrap adjacency and segment ends are
        handled by De Morgan: int S = (closure(S^c))^c)."""
        return self.complement().closure().complement()

    def boundary(self) -> List[Fraction]:
        """Boundary points (exact values, deduplicated)."""
        diff = self.closure().minus(self.interior())
        pts = set()
        for p in diff.pieces:
            pts.add(p.lo)
            pts.add(p.hi)
        return sorted(pts)

    def inset(self, h) -> "ArcSet":
        """Points at distance > h from the complement (an open set)."""
        h = Fraction(h)
        if h < 0:
            raise ValueError("inset must be nonnegative")
        return self.complement().thicken_closed(h).complement()

    def thicken(self, h) -> "ArcSet":
        """Open metric thickening by h > 0."""
        h = Fraction(h)
        result = ArcSet.empty(self.slice)
        for p in self.pieces:
            result = result.union(
                ArcSet.interval(self.slice, p.lo - h, p.hi + h, True, True)
            )
        return result

    def thicken_closed(self, h) -> "ArcSet":
        """Closed metric thickening: points at distance <= h."""
        h = Fraction(h)
        if h == 0:
            return self.closure()
        result = ArcSet.empty(self.slice)
        for p in self.pieces:
            result = result.union(
                ArcSet.interval(self.slice, p.lo - h, p.hi + h, False, False)
            )
        return result

    def total_length(self) -> Fraction:
        return sum((p.hi - p.lo for p in self.pieces), Fraction(0))

    def components(self) -> List["ArcSet"]:
        return [ArcSet(self.slice, [p]) for p in self.pieces]

    def sample_points(self) -> List[Fraction]:
        """Midpoints and endpoints of every piece (deterministic probes)."""
        pts = []
        for p in self.pieces:
            pts.append((p.lo + p.hi) / 2)
            if not p.lo_open:
                pts.append(p.lo)
            if not p.hi_open:
                pts.append(p.hi)
        return pts


def _endpoint_hi(p: Piece) -> Tuple:
    # order key for upper endpoints: closed beats open at equal position
    return (p.hi, 0 if p.hi_open else 1)


def _canonical(slice_: Slice1D, pieces: List[Piece]) -> Tuple[Piece, ...]:
    if not pieces:
        return tuple()
    L = slice_.length
    norm: List[Piece] = []
    full = False
    for p in pieces:
        if not slice_.wrap:
            if p.lo < 0 or p.hi > L:
                raise ValueError("piece outside the segment")
            norm.append(p)
            continue
        width = p.hi - p.lo
        if width > L or (width == L and not (p.lo_open and p.hi_open)):
            full = True
            break
        lo = p.lo % L
        hi = lo + width
        if hi < L or (hi == L and p.hi_open):
            norm.append(Piece(lo, hi, p.lo_open, p.hi_open))
        elif hi == L:  # closed end at L: split off the point 0
            norm.append(Piece(lo, L, p.lo_open, True))
            norm.append(Piece(Fraction(0), Fraction(0), False, False))
        else:
            norm.append(Piece(lo, L, p.lo_open, True))
            norm.append(Piece(Fraction(0), hi - L, False, p.hi_open))
    if full:
        return (Piece(Fraction(0), L, False, True),)
    norm = [p for p in norm if p.lo < p.hi or not (p.lo_open or p.hi_open)]
    if not norm:
        return tuple()
    norm.sort(key=lambda p: (p.lo, p.lo_open, _endpoint_hi(p)))
    merged: List[Piece] = [norm[0]]
    for p in norm[1:]:
        q = merged[-1]
        # touch or overlap?
        if p.lo < q.hi or (p.lo == q.hi and not (p.lo_open and q.hi_open)):
            if _endpoint_hi(p) > _endpoint_hi(q):
                merged[-1] = Piece(q.lo, p.hi, q.lo_open, p.hi_open)
        else:
            merged.append(p)
    return tuple(merged)


def _piece_intersection(p: Piece, q: Piece) -> Optional[Piece]:
    lo, lo_open = max((p.lo, p.lo_open), (q.lo, q.lo_open))
    hi, hi_open = min((p.hi, not p.hi_open), (q.hi, not q.hi_open))
    hi_open = not hi_open
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return None
    return Piece(lo, hi, lo_open, hi_open)


def _piece_difference(p: Piece, q: Piece) -> List[Piece]:
    inter = _piece_intersection(p, q)
    if inter is None:
        return [p]
    out = []
    if p.lo < inter.lo or (p.lo == inter.lo and not p.lo_open and inter.lo_open):
        out_hi_open = not inter.lo_open
        piece = Piece(p.lo, inter.lo, p.lo_open, out_hi_open)
        if piece.lo < piece.hi or (piece.lo == piece.hi and
                                   not (piece.lo_open or piece.hi_open)):
            out.append(piece)
    if p.hi > inter.hi or (p.hi == inter.hi and not p.hi_open and inter.hi_open):
        out_lo_open = not inter.hi_open
        piece = Piece(inter.hi, p.hi, out_lo_open, p.hi_open)
        if piece.lo < piece.hi or (piece.lo == piece.hi and
                                   not (piece.lo_open or piece.hi_open)):
            out.append(piece)
    return out


# ---------------------------------------------------------------------------
# slice isometries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceMap:
    """x -> eps*x + shift on the slice (mod length on circles)."""

    eps: int
    shift: Fraction

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +-1")
        object.__setattr__(self, "shift", Fraction(self.shift))

    def apply(self, slice_: Slice1D, x) -> Fraction:
        return slice_.normalize(self.eps * Fraction(x) + self.shift)

    def compose(self, other: "SliceMap", slice_: Slice1D) -> "SliceMap":
        eps = self.eps * other.eps
        shift = self.eps * other.shift + self.shift
        if slice_.wrap:
            shift %= slice_.length
        return SliceMap(eps, shift)

    def inverse(self, slice_: Slice1D) -> "SliceMap":
        if self.eps == 1:
            shift = -self.shift
        else:
            shift = self.shift
        if slice_.wrap:
            shift %= slice_.length
        return SliceMap(self.eps, shift)

    def apply_set(self, s: ArcSet) -> ArcSet:
        slice_ = s.slice
        out = []
        for p in s.pieces:
            if self.eps == 1:
                lo, hi = p.lo + self.shift, p.hi + self.shift
                lo_open, hi_open = p.lo_open, p.hi_open
            else:
                lo, hi = self.shift - p.hi, self.shift - p.lo
                lo_open, hi_open = p.hi_open, p.lo_open
            if slice_.wrap:
                out.append(ArcSet.interval(slice_, lo, hi, lo_open, hi_open))
            else:
                out.append(ArcSet(slice_, [Piece(lo, hi, lo_open, hi_open)]))
        result = ArcSet.empty(slice_)
        for a in out:
            result = result.union(a)
        return result


class SliceAction:
    """A finite group of slice isometries with a composition table."""

    def __init__(self, slice_: Slice1D, maps: dict):
        self.slice = slice_
        self.maps = dict(maps)
        self.elements = sorted(self.maps.keys(), key=repr)
        for g in self.elements:
            for h in self.elements:
                comp = self.maps[g].compose(self.maps[h], slice_)
                if not any(self.maps[e] == comp for e in self.elements):
                    raise ValueError("maps not closed under composition")

    def order(self) -> int:
        return len(self.elements)

    def apply(self, g, s: ArcSet) -> ArcSet:
        return self.maps[g].apply_set(s)

    def apply_point(self, g, x) -> Fraction:
        return self.maps[g].apply(self.slice, x)

    def is_fin_subset(self, s: ArcSet) -> bool:
        """Translates are equal or disjoint."""
        for g in self.elements:
            moved = self.apply(g, s)
            if moved != s and moved.meets(s):
                return False
        return True

    def stabilizer(self, s: ArcSet) -> List:
        return [g for g in self.elements if self.apply(g, s) == s]

    def symmetrize(self, s: ArcSet) -> ArcSet:
        out = ArcSet.empty(self.slice)
        for g in self.elements:
            out = out.union(self.apply(g, s))
        return out


def trivial_slice_action(slice_: Slice1D) -> SliceAction:
    return SliceAction(slice_, {"e": SliceMap(1, Fraction(0))})
