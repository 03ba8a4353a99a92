"""Numeric certification of the exponential flow estimates.

Every check returns a margin = (claimed bound) - (measured quantity); a
nonnegative margin (up to the stated numeric tolerance) certifies the
sample.  Reports aggregate counts and the worst margin.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .decay import DecayConstants
from .flowspace import (
    DEFAULT_CONFIG,
    FSConfig,
    FlowPoint,
    PairProfile,
    at_vertex,
    dist,
    dist_info,
    flow,
    iota,
    j_map,
    line_interval,
    make_point,
    pseudo_dist,
)
from .kernels import theta
from .extreal import ExtReal
from .samples import random_boundary_point, random_point, random_vertex, random_word
from .tree import ComplexInstance, PointBar, is_interior
from .words import Word, EMPTY, invert, concat


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def rate_coefficient(lam: float, T: float) -> float:
    """N = 2 + 2 / (lambda^T * (-ln lambda))."""
    return 2.0 + 2.0 / (lam ** T * (-math.log(lam)))


@dataclass(frozen=True)
class EstimateConstants:
    lam: float
    T: float
    C: float
    alpha: float

    @staticmethod
    def from_decay(instance: ComplexInstance, decay: DecayConstants,
                   alpha: float) -> "EstimateConstants":
        x0 = instance.base_point
        C = max(
            float(instance.dhat(x0, (g,)))
            for g in range(1, instance.generator_count + 1)
        )
        return EstimateConstants(decay.lam, decay.T, C, alpha)

    @property
    def N(self) -> float:
        return rate_coefficient(self.lam, self.T)

    @property
    def metric_coefficient(self) -> float:
        return self.N / (1.0 - math.log(self.lam) ** 2)

    @property
    def beta_of_alpha(self) -> float:
        return 2.0 * self.C * self.alpha + 5.0

    def f_alpha(self, tau: float) -> float:
        return self.metric_coefficient * self.lam ** (-self.C * self.alpha) \
            * self.lam ** tau


@dataclass
class EstimateReport:
    name: str
    samples: int = 0
    violations: int = 0
    worst_margin: Optional[float] = None
    config: dict = field(default_factory=dict)

    def record(self, margin: float, tolerance: float = 0.0):
        margin = float(margin)
        self.samples += 1
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin
        if margin < -tolerance:
            self.violations += 1

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "config": self.config,
        }


# ---------------------------------------------------------------------------
# elementary identities
# ---------------------------------------------------------------------------


def tau0(instance: ComplexInstance, a: Word, b: Word, c: PointBar, t, s):
    """t - s - <a,b|c,x0>; exact on exact input."""
    x0 = instance.base_point
    return t - s - instance.double_difference(a, b, c, x0)


def tau0_alternative(instance: ComplexInstance, a: Word, b: Word,
                     c: PointBar, t, s):
    """(t - <a,c|b,x0>) - (s - <b,c|a,x0>), equal to tau0 by the cocycle."""
    x0 = instance.base_point
    return (t - instance.double_difference(a, c, b, x0)) - (
        s - instance.double_difference(b, c, a, x0)
    )


def product_identity_chain(instance: ComplexInstance, a: Word, b: Word,
                           c: PointBar, t, s, tau) -> List[Tuple[str, bool]]:
    """The six exact relations tying the time shift to the products.

    All are checked in exact arithmetic; returns (label, holds) pairs.
    """
    x0 = instance.base_point
    dd = instance.double_difference
    gp = instance.gromov_product
    t0 = tau0(instance, a, b, c, t, s)
    out = []
    lhs1 = gp(a, x0, c) - dd(a, c, b, x0)
    mid1 = gp(b, x0, c) - dd(b, c, a, x0)
    rhs1 = gp(a, b, c)
    out.append(("base-product-balance", lhs1 == mid1 == rhs1))
    out.append((
        "shifted-times-align",
        t + tau - dd(a, c, b, x0) == s + tau + t0 - dd(b, c, a, x0),
    ))
    out.append((
        "upper-thresholds-align",
        gp(a, x0, c) - (t + tau) == gp(b, x0, c) - (s + tau + t0),
    ))
    out.append((
        "lower-threshold-a",
        -gp(c, x0, a) - dd(a, c, b, x0) == -gp(c, b, a),
    ))
    out.append((
        "lower-threshold-b",
        -gp(c, x0, b) - dd(b, c, a, x0) == -gp(c, a, b),
    ))
    # sup of the decay exponents over interior probes
    bound = gp(a, x0, c) - dd(a, c, b, x0)
    ok = True
    probe_rng = random.Random(11)
    for _ in range(16):
        u = random_vertex(instance, probe_rng, min(instance.radius, 4))
        m = max(dd(a, c, u, b), dd(b, c, u, a))
        if not ExtReal.of(m) <= bound:
            ok = False
    out.append(("exponent-sup-bound", ok))
    return out


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------


def check_basic_estimate(instance: ComplexInstance, p: FlowPoint, q: FlowPoint,
                         tau: float, config: FSConfig = DEFAULT_CONFIG) -> float:
    """Margin of d(flow_tau p, flow_tau q) <= e^{|tau|} d(p, q)."""
    d0 = dist(instance, p, q, config)
    d1 = dist(instance, flow(p, tau), flow(q, tau), config)
    return math.exp(abs(tau)) * d0 - d1


def check_exponential_support(instance: ComplexInstance, a: Word, b: Word,
                              c: PointBar, t, s, tau,
                              k: EstimateConstants,
                              config: FSConfig = DEFAULT_CONFIG) -> float:
    """Margin of the support-sup bound

        d^x(flow_tau (a,c,t), flow_{tau+tau0} (b,c,s))
            <= N * lam^{t + tau - <a,c|b,x0>}.
    """
    x0 = instance.base_point
    t0 = tau0(instance, a, b, c, t, s)
    p = make_point(instance, a, c, t + tau)
    q = make_point(instance, b, c, s + tau + t0)
    measured = float(pseudo_dist(instance, p, q, config))
    exponent = float(t) + float(tau) - float(
        instance.double_difference(a, c, b, x0)
    )
    bound = k.N * k.lam ** exponent
    return bound - measured


def check_exponential_metric(instance: ComplexInstance, a: Word, b: Word,
                             c: PointBar, t, s, tau,
                             k: EstimateConstants,
                             config: FSConfig = DEFAULT_CONFIG) -> float:
    """Margin of the metric bound with the extra smoothing coefficient."""
    x0 = instance.base_point
    t0 = tau0(instance, a, b, c, t, s)
    p = flow(make_point(instance, a, c, t), tau)
    q = flow(make_point(instance, b, c, s), tau + t0)
    measured = dist(instance, p, q, config)
    exponent = float(t) - float(instance.double_difference(a, c, b, x0))
    bound = k.metric_coefficient * k.lam ** exponent * k.lam ** float(tau)
    return bound - measured


def iota_window(instance: ComplexInstance, a: Word, b: Word, c: PointBar,
                tol: float = 1e-12):
    """(t - <a,c|b,x0>, dhat(a,b)) for the section time at (a, c); the
    value is pinned to [-dhat(a,b), 5/2]."""
    x0 = instance.base_point
    p = iota(instance, a, c, tol)
    if p.at_vertex:
        t = Fraction(0)
        shifted = Fraction(0)  # convention: <a,c|b,x0> = 0 when a = c
    else:
        t = p.t
        shifted = t - float(instance.double_difference(a, c, b, x0))
    return shifted, instance.dhat(a, b)


def check_iota_estimate(instance: ComplexInstance, a: Word, b: Word,
                        c: PointBar, taus: Sequence[float],
                        k: EstimateConstants,
                        config: FSConfig = DEFAULT_CONFIG,
                        tol: float = 1e-12):
    """Returns (tau0, window checks, margins per tau) for the section bound

        d(flow_tau iota(a,c), flow_{tau+tau0} iota(b,c))
            <= N/(1 - ln(lam)^2) * lam^{-dhat(a,b)} * lam^tau,
        |tau0| <= 2 dhat(a,b) + 5.
    """
    x0 = instance.base_point
    pa = iota(instance, a, c, tol)
    pb = iota(instance, b, c, tol)
    t = Fraction(0) if pa.at_vertex else pa.t
    s = Fraction(0) if pb.at_vertex else pb.t
    t0 = float(tau0(instance, a, b, c, t, s))
    dab = float(instance.dhat(a, b))
    tau0_ok = abs(t0) <= 2.0 * dab + 5.0 + 1e-9
    win_a, _ = iota_window(instance, a, b, c, tol)
    win_b, _ = iota_window(instance, b, a, c, tol)
    window_ok = (
        -dab - 1e-9 <= float(win_a) <= 2.5 + 1e-9
        and -dab - 1e-9 <= float(win_b) <= 2.5 + 1e-9
    )
    margins = []
    for tau in taus:
        measured = dist(instance, flow(pa, tau), flow(pb, tau + t0), config)
        bound = k.metric_coefficient * k.lam ** (-dab) * k.lam ** tau
        margins.append(bound - measured)
    return t0, tau0_ok, window_ok, margins


def check_orbit_map_estimate(instance: ComplexInstance, g: Word, h: Word,
                             c: PointBar, taus: Sequence[float],
                             k: EstimateConstants,
                             config: FSConfig = DEFAULT_CONFIG,
                             tol: float = 1e-12):
    """The orbit-map version: for d_G(g,h) <= alpha there is |tau0| <= beta
    with d(flow_tau j(g,c), flow_{tau+tau0} j(h,c)) <= f_alpha(tau)."""
    dg = len(concat(invert(g), h))
    if dg > k.alpha:
        raise ValueError("group elements farther apart than alpha")
    a = instance.check_vertex(g)
    b = instance.check_vertex(h)
    pa = j_map(instance, g, c, tol)
    pb = j_map(instance, h, c, tol)
    t = Fraction(0) if pa.at_vertex else pa.t
    s = Fraction(0) if pb.at_vertex else pb.t
    t0 = float(tau0(instance, a, b, c, t, s))
    tau0_ok = abs(t0) <= k.beta_of_alpha + 1e-9
    margins = []
    for tau in taus:
        measured = dist(instance, flow(pa, tau), flow(pb, tau + t0), config)
        margins.append(k.f_alpha(tau) - measured)
    return t0, tau0_ok, margins


def check_rate_inequalities(lam: float, T: float,
                            grid: Sequence[float]) -> EstimateReport:
    """The three elementary inequalities behind the choice of N:

        2 <= N;
        2 (T - v + lam^v) <= N lam^v      for v <= T;
        v + N lam^{v-w}   <= N lam^{-w}   for 0 <= v <= w.
    """
    N = rate_coefficient(lam, T)
    rep = EstimateReport("rate-coefficient-inequalities",
                         config={"lambda": lam, "T": T})
    rep.record(N - 2.0)
    for v in grid:
        if v <= T:
            rep.record(N * lam ** v - 2.0 * (T - v + lam ** v), 1e-12)
    for v in grid:
        if v < 0:
            continue
        for w in grid:
            if w < v:
                continue
            rep.record(N * lam ** (-w) - (v + N * lam ** (v - w)), 1e-12)
    return rep


# ---------------------------------------------------------------------------
# stratified sampling for the exponential checks
# ---------------------------------------------------------------------------

STRATA = ("below-lower-threshold", "mirror-below-threshold",
          "clamp-saturated", "decay-above-T", "decay-below-T")


def _stratified_time(instance: ComplexInstance, a: Word, b: Word, c: PointBar,
                     stratum: str, rng: random.Random):
    """Choose (t, s, tau) so that t + tau - <a,c|b,x0> lands in the
    requested regime relative to the thresholds -<c|b>_a, -<c|a>_b,
    T-level and <a|b>_c."""
    x0 = instance.base_point
    dd = instance.double_difference(a, c, b, x0)
    lo_a = -instance.gromov_product(c, b, a)  # -<c|b>_a
    lo_b = -instance.gromov_product(c, a, b)  # -<c|a>_b
    hi = instance.gromov_product(a, b, c)     # <a|b>_c, may be +inf
    lo_af = float(lo_a)
    lo_bf = float(lo_b)
    hif = float(hi) if hi.is_finite else lo_af + 12.0
    if stratum == "below-lower-threshold":
        target = lo_af - rng.uniform(0.5, 6.0)
    elif stratum == "mirror-below-threshold":
        target = lo_bf - rng.uniform(0.5, 6.0)
    elif stratum == "clamp-saturated":
        target = hif + rng.uniform(0.5, 6.0)
    elif stratum == "decay-above-T":
        lo = max(lo_af, lo_bf)
        target = rng.uniform(lo, max(hif, lo + 1.0))
    else:  # decay-below-T: small exponent values
        lo = max(lo_af, lo_bf)
        target = rng.uniform(min(lo, 0.0), max(lo, 0.0) + 2.0)
    t = Fraction(rng.randint(-40, 40), 8)
    tau = target + float(dd) - float(t)
    s = Fraction(rng.randint(-40, 40), 8)
    return t, s, tau


def run_exponential_suite(instance: ComplexInstance, k: EstimateConstants,
                          samples: int, seed: int,
                          config: FSConfig = DEFAULT_CONFIG,
                          metric_samples: Optional[int] = None,
                          boundary_prob: float = 0.4):
    """Stratified margins for the support-sup and metric decay bounds."""
    rng = random.Random(seed)
    sup_rep = EstimateReport("exp-decay-support-bound",
                             config={"samples": samples, "seed": seed})
    met_rep = EstimateReport("exp-decay-metric-bound",
                             config={"samples": metric_samples, "seed": seed})
    if metric_samples is None:
        metric_samples = max(1, samples // 8)
    max_len = min(instance.radius, 4)
    drawn = 0
    while drawn < samples:
        a = random_vertex(instance, rng, max_len)
        b = random_vertex(instance, rng, max_len)
        c = random_point(instance, rng, boundary_prob, max_len)
        stratum = STRATA[drawn % len(STRATA)]
        t, s, tau = _stratified_time(instance, a, b, c, stratum, rng)
        margin = check_exponential_support(instance, a, b, c, t, s, tau, k,
                                           config)
        sup_rep.record(margin, 1e-9)
        if drawn < metric_samples:
            margin_m = check_exponential_metric(instance, a, b, c, t, s, tau,
                                                k, config)
            met_rep.record(margin_m, 1e-9)
        drawn += 1
    return sup_rep, met_rep


def run_section_suite(instance: ComplexInstance, k: EstimateConstants,
                      samples: int, seed: int,
                      taus: Sequence[float] = tuple(range(0, 9)),
                      config: FSConfig = DEFAULT_CONFIG):
    """Margins and exact window checks for the section estimates."""
    rng = random.Random(seed)
    rep = EstimateReport("section-flow-estimate",
                         config={"samples": samples, "seed": seed})
    window_rep = EstimateReport("section-time-window",
                                config={"samples": samples, "seed": seed})
    max_len = min(instance.radius, 4)
    for _ in range(samples):
        a = random_vertex(instance, rng, max_len)
        b = random_vertex(instance, rng, max_len)
        c = random_point(instance, rng, 0.5, max_len)
        t0, tau0_ok, window_ok, margins = check_iota_estimate(
            instance, a, b, c, taus, k, config
        )
        window_rep.record(0.0 if (tau0_ok and window_ok) else -1.0)
        for m in margins:
            rep.record(m, 1e-9)
    return rep, window_rep
