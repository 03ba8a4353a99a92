"""Empirical decay constants for the double-difference contraction bound.

The bound asserts |<u,c|a,b>| <= lambda^max{<a,c|u,b>, <b,c|u,a>} whenever
the max is at least T, for some lambda in (1/e, 1) and T >= 0 depending
only on the complex.  The constants are not effective, so we fit them:
draw admissible quadruples and return the smallest grid pair covering
every sample (lambda first, then T).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .samples import random_point
from .tree import ComplexInstance, PointBar


class FitFailure(RuntimeError):
    """No grid pair covers all drawn samples."""


@dataclass(frozen=True)
class DecayConstants:
    lam: float
    T: float

    def __post_init__(self):
        if not (math.exp(-1) < self.lam < 1):
            raise ValueError("lambda must lie in (1/e, 1)")
        if self.T < 0:
            raise ValueError("T must be nonnegative")


LAMBDA_STEP = 0.01
T_STEP = 0.5
T_MAX = 20.0


def lambda_grid() -> List[float]:
    base = math.exp(-1)
    out = []
    j = 1
    while True:
        lam = base + LAMBDA_STEP * j
        if lam >= 0.99:
            break
        out.append(lam)
        j += 1
    return out


def t_grid() -> List[float]:
    n = int(round(T_MAX / T_STEP))
    return [i * T_STEP for i in range(n + 1)]


@dataclass(frozen=True)
class DecaySample:
    value: Fraction      # |<u,c|a,b>|
    exponent: Fraction   # max{<a,c|u,b>, <b,c|u,a>}


def draw_decay_samples(instance: ComplexInstance, sample_count: int,
                       seed: int, boundary_prob: float = 0.4) -> List[DecaySample]:
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    rng = random.Random(seed)
    out: List[DecaySample] = []
    max_len = min(instance.radius, 5)
    while len(out) < sample_count:
        a = random_point(instance, rng, boundary_prob, max_len)
        b = random_point(instance, rng, boundary_prob, max_len)
        c = random_point(instance, rng, boundary_prob, max_len)
        u = random_point(instance, rng, boundary_prob, max_len)
        if not (instance.in_S(a, c, u, b) and instance.in_S(b, c, u, a)):
            continue
        if not instance.in_S(u, c, a, b):
            continue
        value = abs(instance.double_difference(u, c, a, b))
        exponent = max(
            instance.double_difference(a, c, u, b),
            instance.double_difference(b, c, u, a),
        )
        out.append(DecaySample(value, exponent))
    return out


def fit_from_samples(samples: List[DecaySample]) -> DecayConstants:
    for lam in lambda_grid():
        for T in t_grid():
            ok = True
            for s in samples:
                if float(s.exponent) >= T and float(s.value) > lam ** float(s.exponent):
                    ok = False
                    break
            if ok:
                return DecayConstants(lam, T)
    raise FitFailure(
        "no (lambda, T) grid pair is compatible with the drawn samples"
    )


def fit_decay_constants(instance: ComplexInstance, sample_count: int,
                        seed: int) -> DecayConstants:
    """Draw quadruples and return the lexicographically smallest grid pair."""
    return fit_from_samples(draw_decay_samples(instance, sample_count, seed))


def count_violations(instance: ComplexInstance, constants: DecayConstants,
                     sample_count: int, seed: int) -> int:
    """Re-check fitted constants against a fresh sample set."""
    fresh = draw_decay_samples(instance, sample_count, seed)
    bad = 0
    for s in fresh:
        if float(s.exponent) >= constants.T and \
                float(s.value) > constants.lam ** float(s.exponent):
            bad += 1
    return bad
