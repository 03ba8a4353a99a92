"""Fixture complexes and flow models used by the enumerated checks."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .constants import ConstantsLedger
from .boxes import Component, FlowModel
from .simplicial import FiniteAction, SComplex, trivial_action
from .slice1d import Slice1D, SliceAction, SliceMap


def graph_metric(maximal: List[List], vertices: Optional[List] = None) -> Dict:
    """Shortest-path metric with unit edge lengths on the 1-skeleton."""
    verts = sorted({v for s in maximal for v in s}, key=repr)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    INF = 10 ** 9
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for s in maximal:
        for u in s:
            for v in s:
                if u != v:
                    d[idx[u]][idx[v]] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            out[frozenset((verts[i], verts[j]))] = Fraction(d[i][j])
    return out


def _complex(maximal: List[List]) -> SComplex:
    return SComplex(maximal, metric=graph_metric(maximal))


def path_fixture() -> Tuple[SComplex, FiniteAction]:
    maximal = [[i, i + 1] for i in range(4)]
    K = _complex(maximal)
    act = FiniteAction(K, {
        "e": {i: i for i in range(5)},
        "s": {i: 4 - i for i in range(5)},
    })
    return K, act


def hexagon_fixture() -> Tuple[SComplex, FiniteAction]:
    maximal = [[i, (i + 1) % 6] for i in range(6)]
    K = _complex(maximal)
    perms = {}
    for r in range(6):
        perms[f"r{r}"] = {i: (i + r) % 6 for i in range(6)}
    act = FiniteAction(K, perms)
    return K, act


def triangle_pair_fixture() -> Tuple[SComplex, FiniteAction]:
    maximal = [["w1", "w2", "p"], ["w1", "w2", "q"]]
    K = _complex(maximal)
    act = FiniteAction(K, {
        "e": {v: v for v in K.vertices},
        "s": {"w1": "w1", "w2": "w2", "p": "q", "q": "p"},
    })
    return K, act


def triangle_rotation_fixture() -> Tuple[SComplex, FiniteAction]:
    maximal = [["x", "y", "z"]]
    K = _complex(maximal)
    act = FiniteAction(K, {
        "e": {"x": "x", "y": "y", "z": "z"},
        "r": {"x": "y", "y": "z", "z": "x"},
        "r2": {"x": "z", "y": "x", "z": "y"},
    })
    return K, act


def star_fixture() -> Tuple[SComplex, FiniteAction]:
    maximal = [["o", "a"], ["o", "b"], ["o", "c"]]
    K = _complex(maximal)
    act = FiniteAction(K, {
        "e": {v: v for v in K.vertices},
        "r": {"o": "o", "a": "b", "b": "c", "c": "a"},
        "r2": {"o": "o", "a": "c", "b": "a", "c": "b"},
    })
    return K, act


def edge_fixture() -> Tuple[SComplex, FiniteAction]:
    K = _complex([["u", "v"]])
    return K, trivial_action(K)


def gp_fixture_set() -> List[Tuple[str, SComplex, FiniteAction]]:
    return [
        ("path-reflection", *path_fixture()),
        ("hexagon-rotation", *hexagon_fixture()),
        ("triangle-pair-swap", *triangle_pair_fixture()),
        ("triangle-rotation", *triangle_rotation_fixture()),
        ("star-rotation", *star_fixture()),
        ("edge-trivial", *edge_fixture()),
    ]


# ---------------------------------------------------------------------------
# flow models
# ---------------------------------------------------------------------------


def toy_cycle_slice(n: int = 12) -> Tuple[Slice1D, SliceAction]:
    sl = Slice1D(Fraction(n), True)
    act = SliceAction(sl, {
        "e": SliceMap(1, Fraction(0)),
        "s": SliceMap(-1, Fraction(0)),
    })
    return sl, act


def toy_translation_model(alpha=Fraction(1), epsilon=Fraction(1, 2),
                          window=(Fraction(0), Fraction(0)),
                          n: int = 12) -> Tuple[FlowModel, ConstantsLedger]:
    """The one-orbit toy: reflection symmetry on a 12-cycle slice, lattice
    period sized from the exact constants."""
    sl, act = toy_cycle_slice(n)
    probe = ConstantsLedger(2, 2, alpha, epsilon, 1)
    lattice = probe.gamma * 2 + 11
    comp = Component("translation", sl, act, lattice=lattice, window=window)
    return FlowModel([comp]), probe


def mixed_model(alpha=Fraction(1)) -> FlowModel:
    sl, act = toy_cycle_slice(12)
    probe = ConstantsLedger(2, 2, 4 * alpha, alpha / 2, 1)
    trans = Component("translation", sl, act, lattice=probe.gamma * 2 + 11,
                      window=(Fraction(0), Fraction(1, 4)))
    stat = Component("stationary", sl, act)
    peri = Component("periodic", sl, act, circle=Fraction(5))
    return FlowModel([trans, stat, peri])
