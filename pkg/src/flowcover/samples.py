"""Seeded random points of a tree instance and its boundary."""

from __future__ import annotations

import random
from typing import Optional

from .tree import BoundaryPoint, ComplexInstance, PointBar
from .words import Word, EMPTY


def random_vertex(instance: ComplexInstance, rng: random.Random,
                  max_len: Optional[int] = None) -> Word:
    bound = instance.radius if max_len is None else min(max_len, instance.radius)
    n = rng.randint(0, bound)
    return random_word(instance, rng, n)


def random_word(instance: ComplexInstance, rng: random.Random, n: int,
                forbid_first_inverse_of: int = 0) -> Word:
    k = instance.generator_count
    out: list = []
    for _ in range(n):
        while True:
            g = rng.choice(range(1, k + 1)) * rng.choice((1, -1))
            if out and out[-1] == -g:
                continue
            if not out and g == -forbid_first_inverse_of:
                continue
            out.append(g)
            break
    return tuple(out)


def random_boundary_point(instance: ComplexInstance, rng: random.Random,
                          max_prefix: int = 3, max_cycle: int = 3) -> BoundaryPoint:
    while True:
        prefix = random_word(instance, rng, rng.randint(0, max_prefix))
        cycle = random_word(instance, rng, rng.randint(1, max_cycle))
        try:
            return BoundaryPoint.make(prefix, cycle)
        except ValueError:
            continue


def random_point(instance: ComplexInstance, rng: random.Random,
                 boundary_prob: float = 0.4, max_len: Optional[int] = None,
                 max_prefix: int = 3, max_cycle: int = 3) -> PointBar:
    if rng.random() < boundary_prob:
        return random_boundary_point(instance, rng, max_prefix, max_cycle)
    return random_vertex(instance, rng, max_len)
