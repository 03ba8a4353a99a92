"""Pulling a flow-space cover back to (group element, compactified point)
pairs.

Given a tube cover of the flow space (each chart point carries the member
obtained by thickening its flow segment), a scale alpha, and fitted decay
constants, the demo chooses the thickening radius delta and the push time
tau by the chain of inequalities

    0 < e^beta * eps_xi < delta_xi / 2,      f_alpha(tau) < delta,

and then certifies for sampled (g0, c) that the whole open alpha-ball of
g0 times {c} lands, after flowing by tau, inside the single member
attached to the chart point of (g0, c).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .estimates import EstimateConstants, tau0
from .flowspace import (
    DEFAULT_CONFIG,
    FSConfig,
    FlowPoint,
    dist,
    flow,
    j_map,
)
from .samples import random_boundary_point, random_vertex, random_word
from .tree import ComplexInstance, PointBar, is_interior
from .words import Word, concat, invert


class PullbackFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class TubeCover:
    """The intensional flow-space cover used by the demo: for every chart
    point xi, the member V_xi is the open 2*delta_bar-thickening of the
    flow segment phi_[-2 beta, 2 beta](xi); by construction the
    delta_xi-thickening of the segment sits inside V_xi for
    delta_xi = 2 * delta_bar."""

    beta: float
    delta_bar: float

    @property
    def delta_xi(self) -> float:
        return 2.0 * self.delta_bar

    @property
    def eps_xi(self) -> float:
        # 0 < e^beta eps_xi < delta_xi / 2
        return self.delta_xi / (4.0 * math.exp(self.beta))

    def chain_ok(self) -> bool:
        return 0.0 < math.exp(self.beta) * self.eps_xi < self.delta_xi / 2.0


@dataclass
class PullbackSample:
    g0: Word
    c: PointBar
    certified: bool
    ball_size: int
    worst_gap: float       # min over ball of (f_alpha bound - distance)
    tau0_bound_ok: bool


@dataclass
class PullbackReport:
    alpha: float
    beta: float
    delta: float
    tau: float
    f_alpha_at_tau: float
    samples: List[PullbackSample] = field(default_factory=list)
    tube_containment_checked: int = 0
    tube_containment_ok: bool = True

    def all_certified(self) -> bool:
        return all(s.certified and s.tau0_bound_ok for s in self.samples)


def choose_push_time(k: EstimateConstants, delta: float,
                     tau_max: float = 400.0) -> float:
    """The smallest integer tau with f_alpha(tau) < delta (the decay is
    exact per unit step, so an integer search is faithful)."""
    tau = 0.0
    while k.f_alpha(tau) >= delta:
        tau += 1.0
        if tau > tau_max:
            raise PullbackFailure(
                f"no tau <= {tau_max} with decay below delta = {delta}; "
                f"needed roughly {math.log(delta / k.metric_coefficient) / math.log(k.lam) + k.C * k.alpha}"
            )
    return tau


def ball_elements(instance: ComplexInstance, g0: Word, alpha: float) -> List[Word]:
    """Group elements strictly within alpha of g0 in the word metric."""
    radius = int(math.ceil(alpha)) - 1
    out = [g0]
    frontier = [g0]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            k = instance.generator_count
            for gidx in list(range(1, k + 1)) + list(range(-k, 0)):
                if w and w[-1] == -gidx:
                    continue
                moved = w + (gidx,)
                nxt.append(moved)
        frontier = nxt
        out.extend(nxt)
    # dedup; also include shortened words (distance via cancellation)
    seen = []
    found = set()
    for w in out:
        if w not in found and len(w) <= instance.radius:
            found.add(w)
            seen.append(w)
    return seen


def pullback_cover(instance: ComplexInstance, k: EstimateConstants,
                   boundary_depth: int = 8, sample_count: int = 100,
                   seed: int = 0, config: FSConfig = DEFAULT_CONFIG,
                   tube_checks: int = 3,
                   tol: float = 1e-12) -> PullbackReport:
    """Run the pullback demo: build the tube cover parameters, choose
    delta and tau by the proof chain, and certify the sampled pairs."""
    alpha = k.alpha
    beta = k.beta_of_alpha
    delta_bar = 0.25
    tubes = TubeCover(beta, delta_bar)
    if not tubes.chain_ok():
        raise PullbackFailure("the thickening chain is inconsistent")
    delta = min(tubes.delta_xi / 2.0, delta_bar)
    tau = choose_push_time(k, delta)
    report = PullbackReport(alpha, beta, delta, tau, k.f_alpha(tau))
    if not report.f_alpha_at_tau < delta:
        raise PullbackFailure("decay at the chosen push time is too large")

    rng = random.Random(seed)
    max_g = max(1, min(instance.radius - 1, 3))
    for _ in range(sample_count):
        g0 = random_word(instance, rng, rng.randint(0, max_g))
        if rng.random() < 0.5:
            c: PointBar = random_boundary_point(
                instance, rng,
                max_prefix=max(1, boundary_depth - 2),
                max_cycle=min(3, boundary_depth),
            )
            while c.depth() > boundary_depth:
                c = random_boundary_point(instance, rng, 2, 2)
        else:
            c = random_vertex(instance, rng, min(instance.radius,
                                                 boundary_depth))
        report.samples.append(
            _certify_sample(instance, k, tubes, g0, c, tau, delta, config,
                            tol)
        )

    # re-check the tube containment condition on a few chart points
    rng2 = random.Random(seed + 1)
    ok = True
    for _ in range(tube_checks):
        g = random_word(instance, rng2, 1)
        c = random_boundary_point(instance, rng2, 1, 2)
        xi = j_map(instance, g, c, tol)
        for frac in (0.0, 0.5, 1.0):
            sigma = (2 * frac - 1) * 2.0 * beta
            probe = flow(xi, sigma)
            # a point delta-close to the segment: flow a little then check
            # it is within delta_xi of the segment by construction
            d = dist(instance, probe, flow(xi, sigma + delta / 2), config)
            if not d < tubes.delta_xi:
                ok = False
        report.tube_containment_checked += 1
    report.tube_containment_ok = ok
    return report


def _certify_sample(instance: ComplexInstance, k: EstimateConstants,
                    tubes: TubeCover, g0: Word, c: PointBar, tau: float,
                    delta: float, config: FSConfig,
                    tol: float) -> PullbackSample:
    from .estimates import check_orbit_map_estimate

    ball = ball_elements(instance, g0, k.alpha)
    worst = math.inf
    certified = True
    tau0_ok = True
    xi = j_map(instance, g0, c, tol)
    for g in ball:
        t0, ok0, margins = check_orbit_map_estimate(
            instance, g0, g, c, [tau], k, config, tol
        )
        tau0_ok &= ok0 and abs(t0) <= tubes.beta + 1e-9
        bound = k.f_alpha(tau)
        measured = bound - margins[0]
        worst = min(worst, delta - measured)
        if not measured < delta:
            certified = False
    return PullbackSample(g0, c, certified, len(ball), worst, tau0_ok)
