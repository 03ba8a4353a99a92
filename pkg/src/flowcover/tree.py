"""Cayley trees of free groups, their boundaries, and exact products.

The complex is the ball of radius ``R`` in the Cayley graph of the free
group on ``k`` generators: vertices are reduced words of length <= R, the
base point is the empty word, and the base metric defaults to the graph
metric (which on a tree extends continuously to the boundary).

Boundary points are eventually periodic rays ``prefix . cycle^inf``; the
representation is canonicalized (primitive cycle, shortest prefix) so that
equality of boundary points is equality of representations.

All products are computed exactly through longest-common-prefix lengths of
the geodesics from the base point:

    <u|v>_e           = lcp(u, v)
    d(u, v)           = |u| + |v| - 2 lcp(u, v)
    <a|b>_c           = |c| + lcp(a,b) - lcp(a,c) - lcp(b,c)   (c interior)
    <a,a'|b,b'>       = lcp(a',b) + lcp(a,b') - lcp(a,b) - lcp(a',b')

with the usual conventions when an lcp is infinite (coincident boundary
points).  Values are ints, Fractions or +-inf wrapped in ExtReal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union

from .extreal import ExtReal, NEG_INF, POS_INF
from .words import (
    Word,
    EMPTY,
    common_prefix_len,
    concat,
    invert,
    is_reduced,
    max_generator,
    reduce_word,
    str_to_word,
    word_to_str,
)


class DomainError(ValueError):
    """Argument outside the operation's admissible domain."""


class OutOfComplexError(DomainError):
    """A vertex fell outside the truncation radius of the instance."""


# ---------------------------------------------------------------------------
# boundary points
# ---------------------------------------------------------------------------


def _primitive_root(cycle: Word) -> Word:
    n = len(cycle)
    for p in range(1, n + 1):
        if n % p:
            continue
        if cycle == cycle[:p] * (n // p):
            return cycle[:p]
    return cycle


def _rotate_right(cycle: Word) -> Word:
    return (cycle[-1],) + cycle[:-1]


@dataclass(frozen=True)
class BoundaryPoint:
    """An eventually periodic geodesic ray ``prefix . cycle . cycle ...``.

    Stored in canonical form: the cycle is primitive and the prefix is the
    shortest one representing the ray, so two boundary points are equal iff
    their fields are equal.
    """

    prefix: Word
    cycle: Word

    def __post_init__(self):
        if not self.cycle:
            raise DomainError("boundary point needs a nonempty cycle")
        if not (is_reduced(self.prefix) and is_reduced(self.cycle)):
            raise DomainError("prefix and cycle must be reduced words")
        if not is_reduced(self.prefix + self.cycle):
            raise DomainError("prefix.cycle junction must be reduced")
        if not is_reduced(self.cycle + self.cycle):
            raise DomainError("cycle.cycle junction must be reduced")

    @staticmethod
    def make(prefix: Word, cycle: Word) -> "BoundaryPoint":
        """Canonicalize: primitive cycle, then strip the prefix as far as
        the ray allows (absorbing stripped letters into a cycle rotation)."""
        bp = BoundaryPoint(prefix, cycle)  # validates junctions
        cycle = _primitive_root(bp.cycle)
        prefix = bp.prefix
        while prefix and prefix[-1] == cycle[-1]:
            prefix = prefix[:-1]
            cycle = _rotate_right(cycle)
        return BoundaryPoint(prefix, cycle)

    def letter(self, i: int) -> int:
        """The i-th letter (0-based) of the infinite ray word."""
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def vertex(self, n: int) -> Word:
        """The vertex at distance n from the base point along the ray."""
        return tuple(self.letter(i) for i in range(n))

    def depth(self) -> int:
        return len(self.prefix) + len(self.cycle)

    def __str__(self) -> str:
        return f"{word_to_str(self.prefix)}|{word_to_str(self.cycle)}"


PointBar = Union[Word, BoundaryPoint]
"""A point of the compactified tree: a vertex (reduced word) or a ray."""


def is_interior(p: PointBar) -> bool:
    return not isinstance(p, BoundaryPoint)


def parse_point(s: str) -> PointBar:
    if "|" in s:
        pre, cyc = s.split("|", 1)
        return BoundaryPoint.make(str_to_word(pre), str_to_word(cyc))
    return str_to_word(s)


def format_point(p: PointBar) -> str:
    if isinstance(p, BoundaryPoint):
        return str(p)
    return word_to_str(p)


def lcp(p: PointBar, q: PointBar) -> ExtReal:
    """Length of the longest common prefix of the rays from the base point.

    Equals <p|q>_{x0}; infinite iff p = q in the compactification and p is
    a boundary point (for interior p = q it is the finite length |p|).
    """
    pi = is_interior(p)
    qi = is_interior(q)
    if pi and qi:
        return ExtReal(common_prefix_len(p, q))
    if pi:
        p, q = q, p
        pi, qi = qi, pi
    # p is a boundary point
    if qi:
        for i in range(len(q)):
            if p.letter(i) != q[i]:
                return ExtReal(i)
        return ExtReal(len(q))
    # both boundary: eventually periodic words agree iff they agree on a
    # window of length max(preperiods) + lcm(periods)
    bound = max(len(p.prefix), len(q.prefix)) + _lcm(len(p.cycle), len(q.cycle))
    for i in range(bound):
        if p.letter(i) != q.letter(i):
            return ExtReal(i)
    return POS_INF


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def points_equal(p: PointBar, q: PointBar) -> bool:
    if is_interior(p) != is_interior(q):
        return False
    if is_interior(p):
        return p == q
    return p == q  # canonical forms


# ---------------------------------------------------------------------------
# the complex instance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexInstance:
    """Ball of radius ``radius`` in the Cayley tree of the free group F_k."""

    generator_count: int
    radius: int
    base_metric: str = "graph"

    def __post_init__(self):
        if self.generator_count < 1:
            raise DomainError("need at least one generator")
        if self.radius < 1:
            raise DomainError("radius must be positive")
        if self.base_metric != "graph":
            raise DomainError(
                "only the graph metric is implemented; plug in another "
                "metric by subclassing"
            )

    @property
    def base_point(self) -> Word:
        return EMPTY

    # -- vertex bookkeeping -------------------------------------------------
    def check_vertex(self, v: Word) -> Word:
        if not is_reduced(v):
            raise DomainError(f"{v!r} is not reduced")
        if max_generator(v) > self.generator_count:
            raise DomainError(f"{v!r} uses generators beyond k={self.generator_count}")
        if len(v) > self.radius:
            raise OutOfComplexError(
                f"vertex of length {len(v)} outside radius {self.radius}"
            )
        return v

    def check_point(self, p: PointBar) -> PointBar:
        if is_interior(p):
            return self.check_vertex(p)
        if max_generator(p.prefix) > self.generator_count or max_generator(
            p.cycle
        ) > self.generator_count:
            raise DomainError("boundary point uses generators beyond k")
        return p

    def vertices(self, max_len: Optional[int] = None) -> Iterator[Word]:
        """All vertices of length <= max_len (default: the whole ball)."""
        bound = self.radius if max_len is None else min(max_len, self.radius)
        k = self.generator_count
        frontier: list = [EMPTY]
        yield EMPTY
        for _ in range(bound):
            nxt = []
            for w in frontier:
                for g in itertools.chain(range(1, k + 1), range(-k, 0)):
                    if w and w[-1] == -g:
                        continue
                    nxt.append(w + (g,))
            for w in nxt:
                yield w
            frontier = nxt

    def neighbors(self, v: Word) -> Iterator[Word]:
        k = self.generator_count
        if v:
            yield v[:-1]
        if len(v) < self.radius:
            for g in itertools.chain(range(1, k + 1), range(-k, 0)):
                if v and v[-1] == -g:
                    continue
                yield v + (g,)

    # -- metric and products --------------------------------------------------
    def word_distance(self, u: Word, v: Word) -> int:
        """Graph distance = reduced length of u^{-1} v."""
        self.check_vertex(u)
        self.check_vertex(v)
        return len(u) + len(v) - 2 * common_prefix_len(u, v)

    def dhat(self, u: Word, v: Word) -> Fraction:
        """The base metric (graph metric by default), exact."""
        return Fraction(self.word_distance(u, v))

    def in_T(self, a: PointBar, b: PointBar, c: PointBar) -> bool:
        """Domain of the Gromov product <a|b>_c."""
        if is_interior(c):
            return True
        return not points_equal(a, c) and not points_equal(b, c)

    def in_S(self, a: PointBar, a2: PointBar, b: PointBar, b2: PointBar) -> bool:
        """Domain of the double difference <a,a'|b,b'>: every pair that is
        matched by one of the four distances must be distinct if both of
        its members are boundary points."""
        for p, q in ((a, b), (a, b2), (a2, b), (a2, b2)):
            if (
                not is_interior(p)
                and not is_interior(q)
                and points_equal(p, q)
            ):
                return False
        return True

    def gromov_product(self, a: PointBar, b: PointBar, c: PointBar) -> ExtReal:
        """<a|b>_c, extended to the compactification.

        Infinite iff c is a boundary point or a = b is a boundary point;
        exact (integer) otherwise.
        """
        a = self.check_point(a)
        b = self.check_point(b)
        c = self.check_point(c)
        if not self.in_T(a, b, c):
            raise DomainError("(a, b, c) outside the product's domain")
        if not is_interior(c):
            return POS_INF
        lab = lcp(a, b)
        if not lab.is_finite:
            return POS_INF
        lac = lcp(a, c)
        lbc = lcp(b, c)
        return ExtReal(len(c)) + lab - lac - lbc

    def double_difference(
        self, a: PointBar, a2: PointBar, b: PointBar, b2: PointBar
    ) -> Fraction:
        """<a,a'|b,b'>, extended to the compactification; always finite
        (and exact) on the admissible domain."""
        a = self.check_point(a)
        a2 = self.check_point(a2)
        b = self.check_point(b)
        b2 = self.check_point(b2)
        if not self.in_S(a, a2, b, b2):
            raise DomainError("(a, a', b, b') outside the double difference domain")
        total = lcp(a2, b) + lcp(a, b2) - lcp(a, b) - lcp(a2, b2)
        return as_fraction_checked(total)

    # -- group action ---------------------------------------------------------
    def act(self, g: Word, p: PointBar) -> PointBar:
        """Left translation by the group element g."""
        if not is_reduced(g):
            raise DomainError("group element must be reduced")
        if is_interior(p):
            moved = concat(g, p)
            return self.check_vertex(moved)
        # act on the ray: cancellation eats at most |g| letters of the ray
        k = (len(g) // len(p.cycle)) + 2
        head = p.prefix + p.cycle * k
        new_prefix = concat(g, head)
        return BoundaryPoint.make(new_prefix, p.cycle)

    def act_element(self, g: Word, h: Word) -> Word:
        """Group multiplication g*h (no radius check; group elements)."""
        return concat(g, h)


def as_fraction_checked(x: ExtReal) -> Fraction:
    if not x.is_finite:
        raise DomainError("value is infinite on this input")
    return Fraction(x.value)


def gromov_product_raw(a: PointBar, b: PointBar, c: PointBar) -> ExtReal:
    """<a|b>_c on the ambient (untruncated) tree; c must be interior.

    Used for probe vertices that may lie outside an instance's radius.
    """
    if not is_interior(c):
        return POS_INF
    lab = lcp(a, b)
    if not lab.is_finite:
        return POS_INF
    return ExtReal(len(c)) + lab - lcp(a, c) - lcp(b, c)


def double_difference_raw(
    a: PointBar, a2: PointBar, b: PointBar, b2: PointBar
) -> Fraction:
    """<a,a'|b,b'> on the ambient tree (domain assumed admissible)."""
    total = lcp(a2, b) + lcp(a, b2) - lcp(a, b) - lcp(a2, b2)
    return as_fraction_checked(total)


# ---------------------------------------------------------------------------
# geodesics (used by tests as an oracle hull, and by the sup-candidate set)
# ---------------------------------------------------------------------------


def geodesic_vertices(
    instance: ComplexInstance, p: PointBar, q: PointBar, ray_depth: int
) -> list:
    """Vertices on the geodesic from p to q, with rays truncated at
    ``ray_depth`` steps past the confluence point.

    For interior endpoints the full (finite) geodesic is returned.
    """
    out = []
    meet = lcp(p, q)
    if not meet.is_finite:
        # p = q as boundary points: the "geodesic" is the ray itself
        if is_interior(p):
            return [p]
        return [p.vertex(n) for n in range(ray_depth + 1)]
    m = int(meet.value)
    for side in (p, q):
        if is_interior(side):
            for n in range(m, len(side) + 1):
                out.append(side[:n])
        else:
            for n in range(m, m + ray_depth + 1):
                out.append(side.vertex(n))
    # dedupe, keep deterministic order
    seen = set()
    uniq = []
    for v in out:
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    return uniq
