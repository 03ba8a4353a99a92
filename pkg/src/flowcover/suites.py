"""Runnable verification suites shared by the CLI and the test suite.

Each suite draws seeded samples, checks the advertised identities or
bounds at their stated tolerances, and records per-check outcomes in a
Report.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .decay import DecayConstants, count_violations, draw_decay_samples, \
    fit_from_samples
from .estimates import (
    EstimateConstants,
    check_basic_estimate,
    check_rate_inequalities,
    product_identity_chain,
    run_exponential_suite,
    run_section_suite,
    tau0,
    tau0_alternative,
)
from .extreal import ExtReal, NEG_INF, POS_INF
from .flowspace import (
    DEFAULT_CONFIG,
    FSConfig,
    at_vertex,
    dist,
    dist_info,
    flow,
    make_point,
    pseudo_dist,
)
from .kernels import (
    Interval,
    Theta,
    Theta_derivative,
    Theta_inverse,
    smoothing_quadrature,
    theta,
)
from .report import Report
from .samples import random_boundary_point, random_point, random_vertex, \
    random_word
from .tree import ComplexInstance, is_interior, points_equal


# ---------------------------------------------------------------------------
# double-difference identities
# ---------------------------------------------------------------------------


def identity_suite(instance: ComplexInstance, samples: int, seed: int,
                   boundary_prob: float = 0.4) -> Report:
    """Exact identity checks for the extended products on seeded
    quadruples (boundary points included)."""
    rng = random.Random(seed)
    rep = Report("verify-identities", {
        "generators": instance.generator_count,
        "radius": instance.radius,
        "samples": samples,
        "seed": seed,
    })
    dd = instance.double_difference
    gp = instance.gromov_product
    max_len = min(instance.radius, 5)

    bad = {name: 0 for name in
           ("swap", "antisymmetry", "degenerate", "cocycle", "triple-sum",
            "product-difference", "invariance", "nonnegative")}
    drawn = 0
    while drawn < samples:
        pts = [random_point(instance, rng, boundary_prob, max_len)
               for _ in range(5)]
        a, a2, b, b2, x = pts
        if not (instance.in_S(a, a2, b, b2) and instance.in_S(a2, a, b, b2)):
            continue
        drawn += 1
        if dd(a, a2, b, b2) != dd(b, b2, a, a2):
            bad["swap"] += 1
        if dd(a, a2, b, b2) != -dd(a2, a, b, b2) or \
                dd(a, a2, b, b2) != -dd(a, a2, b2, b):
            bad["antisymmetry"] += 1
        if dd(a, a, b, b2) != 0 or dd(a, a2, b, b) != 0:
            bad["degenerate"] += 1
        if instance.in_S(a, x, b, b2) and instance.in_S(a2, x, b, b2):
            if dd(a, a2, b, b2) + dd(a2, x, b, b2) != dd(a, x, b, b2):
                bad["cocycle"] += 1
        if instance.in_S(a, b, a2, x) and instance.in_S(a2, a, b, x) \
                and instance.in_S(b, a2, a, x):
            if dd(a, b, a2, x) + dd(a2, a, b, x) + dd(b, a2, a, x) != 0:
                bad["triple-sum"] += 1
        if is_interior(a) and instance.in_T(b, a2, a) \
                and instance.in_T(b, b2, a) and instance.in_S(a, b, a2, b2):
            lhs = ExtReal.of(dd(a, b, a2, b2))
            rhs = gp(b, a2, a) - gp(b, b2, a)
            if lhs != rhs:
                bad["product-difference"] += 1
        g = random_word(instance, rng, rng.randint(0, 2))
        try:
            moved = [instance.act(g, p) for p in (a, a2, b, b2)]
            if dd(*moved) != dd(a, a2, b, b2):
                bad["invariance"] += 1
        except Exception:
            pass
        if is_interior(x) and instance.in_T(a, b, x):
            val = gp(a, b, x)
            if val.is_finite and val.value < 0:
                bad["nonnegative"] += 1
            if is_interior(a) and val.is_finite and \
                    ExtReal.of(instance.dhat(a, x)) < val:
                bad["nonnegative"] += 1

    claims = {
        "swap": "double difference is symmetric under swapping the pairs",
        "antisymmetry": "double difference flips sign in each slot",
        "degenerate": "repeated entries give zero",
        "cocycle": "first-slot cocycle relation",
        "triple-sum": "cyclic triple sum vanishes",
        "product-difference": "difference of based products",
        "invariance": "invariance under the group action",
        "nonnegative": "product bounds on the tree",
    }
    for name, cnt in bad.items():
        rep.add(f"identity-{name}", claims[name], cnt == 0,
                violations=cnt, samples=drawn)
    return rep


# ---------------------------------------------------------------------------
# kernel suite
# ---------------------------------------------------------------------------


def theta_suite(grid: int = 10000, seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report("verify-theta", {"grid": grid, "seed": seed})

    def sample_interval() -> Interval:
        mode = rng.random()
        a = rng.uniform(-8, 6)
        w = rng.uniform(0.1, 10)
        if mode < 0.15:
            return Interval.of(-math.inf, a)
        if mode < 0.3:
            return Interval.of(a, math.inf)
        if mode < 0.35:
            return Interval.of(-math.inf, math.inf)
        return Interval.of(a, a + w)

    # derivative vs central differences
    worst_d = 0.0
    h = 1e-4
    for _ in range(grid // 4):
        iv = sample_interval()
        if iv.degenerate:
            continue
        t = rng.uniform(-12, 12)
        num = (float(Theta(iv, t + h)) - float(Theta(iv, t - h))) / (2 * h)
        worst_d = max(worst_d, abs(num - Theta_derivative(iv, t)))
    rep.add("derivative-matches-differences",
            "closed-form slope equals central finite differences",
            worst_d <= 1e-6, max_error=worst_d, tolerance=1e-6)

    # integral representation (finite intervals)
    worst_i = 0.0
    for _ in range(grid // 16):
        a = rng.uniform(-6, 4)
        iv = Interval.of(a, a + rng.uniform(0.2, 8))
        t = rng.uniform(-10, 10)
        quad = smoothing_quadrature(iv, t)
        worst_i = max(worst_i, abs(quad - float(Theta(iv, t))))
    rep.add("integral-representation",
            "smoothing integral equals the closed form",
            worst_i <= 1e-8, max_error=worst_i, tolerance=1e-8)

    # second closed form of the smoothing
    worst_c = 0.0
    for _ in range(grid // 4):
        a = rng.uniform(-6, 4)
        iv = Interval.of(a, a + rng.uniform(0.2, 8))
        t = rng.uniform(-10, 10)
        alt = float(theta(iv, t)) \
            + math.exp(-abs(float(iv.alpha) - t)) / 2 \
            - math.exp(-abs(float(iv.beta) - t)) / 2
        worst_c = max(worst_c, abs(alt - float(Theta(iv, t))))
    rep.add("clamp-correction-form",
            "clamp plus exponential corrections equals the smoothing",
            worst_c <= 1e-12, max_error=worst_c, tolerance=1e-12)

    # monotone + non-expanding
    mono_bad = 0
    worst_e = 0.0
    for _ in range(grid):
        iv = sample_interval()
        t = rng.uniform(-15, 15)
        s = rng.uniform(-15, 15)
        ft, fs = float(Theta(iv, t)), float(Theta(iv, s))
        if (t - s) * (ft - fs) < 0:
            mono_bad += 1
        if not iv.degenerate and t != s and \
                abs(ft - fs) > abs(t - s) + 1e-12:
            worst_e = max(worst_e, abs(ft - fs) - abs(t - s))
        ct, cs = float(theta(iv, t)), float(theta(iv, s))
        if abs(ct - cs) > abs(t - s) + 1e-12:
            worst_e = max(worst_e, abs(ct - cs) - abs(t - s))
    rep.add("monotone", "both reparametrizations are monotone",
            mono_bad == 0, violations=mono_bad)
    rep.add("non-expanding", "both reparametrizations are 1-Lipschitz",
            worst_e <= 1e-12, max_excess=worst_e, tolerance=1e-12)

    # shift invariance (exact arithmetic on rationals)
    worst_s = 0.0
    for _ in range(grid // 4):
        a = rng.uniform(-6, 4)
        iv = Interval.of(a, a + rng.uniform(0.2, 8))
        t = rng.uniform(-10, 10)
        s = rng.uniform(-5, 5)
        shifted = Interval.of(float(iv.alpha) + s, float(iv.beta) + s)
        worst_s = max(worst_s, abs(float(Theta(shifted, t + s))
                                   - (float(Theta(iv, t)) + s)))
    rep.add("shift-invariance",
            "translating the interval translates the smoothing",
            worst_s <= 1e-12, max_error=worst_s, tolerance=1e-12)

    # interval perturbation bound
    bad_p = 0
    for _ in range(grid // 8):
        a0 = rng.uniform(-6, 4)
        b0 = a0 + rng.uniform(0.2, 8)
        a1 = a0 + rng.uniform(-1, 1)
        b1 = b0 + rng.uniform(-1, 1)
        if a1 > b1:
            a1, b1 = b1, a1
        t = rng.uniform(-10, 10)
        c = max(abs(a1 - a0), abs(b1 - b0))
        d = abs(float(Theta(Interval.of(a1, b1), t))
                - float(Theta(Interval.of(a0, b0), t)))
        if d > c + 1e-12:
            bad_p += 1
    rep.add("endpoint-perturbation",
            "moving the interval moves the smoothing by at most as much",
            bad_p == 0, violations=bad_p)

    # half-line difference identity (exact branch arithmetic)
    worst_h = 0.0
    for _ in range(grid // 8):
        a = rng.uniform(-6, 4)
        b = a + rng.uniform(0.2, 8)
        t = rng.uniform(a, a + 12)
        lhs = float(Theta(Interval.of(a, b), t)) \
            - float(Theta(Interval.of(-math.inf, b), t))
        worst_h = max(worst_h, abs(lhs - math.exp(a - t) / 2))
    rep.add("half-line-difference",
            "finite lower end contributes one exponential correction",
            worst_h <= 1e-12, max_error=worst_h, tolerance=1e-12)

    # the two bound-on-t implications
    bad_b = 0
    for _ in range(grid // 8):
        a = rng.uniform(-6, 4)
        b = a + rng.uniform(0.2, 8)
        iv = Interval.of(a, b)
        t = rng.uniform(-12, 12)
        v = float(Theta(iv, t))
        mid = (a + b) / 2
        if v <= mid and not (t <= min(b, v + 0.5) + 1e-12):
            bad_b += 1
        if v >= mid and not (t >= max(a, v - 0.5) - 1e-12):
            bad_b += 1
    rep.add("value-pins-argument",
            "the smoothing value localizes its argument",
            bad_b == 0, violations=bad_b)

    # inverse round trips
    worst_r = 0.0
    tol = 1e-12
    for _ in range(grid // 8):
        a = rng.uniform(-6, 4)
        iv = Interval.of(a, a + rng.uniform(0.2, 8))
        t = rng.uniform(-10, 10)
        y = float(Theta(iv, t))
        if not (float(iv.alpha) < y < float(iv.beta)):
            continue
        back = float(Theta_inverse(iv, y, tol))
        worst_r = max(worst_r, abs(float(Theta(iv, back)) - y))
    rep.add("inverse-round-trip",
            "the bisection inverse hits its target value",
            worst_r <= 2 * tol, max_error=worst_r, tolerance=2 * tol)
    return rep


# ---------------------------------------------------------------------------
# flow estimate suite
# ---------------------------------------------------------------------------


def flow_estimate_suite(instance: ComplexInstance,
                        constants: Optional[DecayConstants],
                        samples: int, seed: int,
                        config: FSConfig = DEFAULT_CONFIG,
                        alpha: float = 2.0,
                        fit_samples: int = 10000) -> Report:
    rep = Report("verify-flow-estimates", {
        "generators": instance.generator_count,
        "radius": instance.radius,
        "samples": samples,
        "seed": seed,
        "alpha": alpha,
    })
    if constants is None:
        drawn = draw_decay_samples(instance, fit_samples, seed)
        constants = fit_from_samples(drawn)
        fresh = count_violations(instance, constants, fit_samples, seed + 1)
        rep.add("decay-fit-recheck",
                "fitted constants hold on a fresh sample set",
                fresh == 0, violations=fresh, lam=constants.lam,
                T=constants.T)
    rep.config["lambda"] = constants.lam
    rep.config["T"] = constants.T
    k = EstimateConstants.from_decay(instance, constants, alpha)

    rng = random.Random(seed)
    basic_rep_bad = 0
    worst_basic = math.inf
    n_basic = max(10, samples // 10)
    for _ in range(n_basic):
        p = _random_flow_point(instance, rng)
        q = _random_flow_point(instance, rng)
        tau = rng.uniform(-5, 5)
        margin = check_basic_estimate(instance, p, q, tau, config)
        tol = 3 * config.quad_tol * math.exp(abs(tau))
        worst_basic = min(worst_basic, margin)
        if margin < -tol:
            basic_rep_bad += 1
    rep.add("basic-flow-estimate",
            "flowing expands the metric at most exponentially",
            basic_rep_bad == 0, violations=basic_rep_bad,
            worst_margin=worst_basic, samples=n_basic)

    sup_rep, met_rep = run_exponential_suite(
        instance, k, samples, seed + 2, config,
        metric_samples=max(10, samples // 8),
    )
    rep.add("exp-decay-support-bound",
            "support-sup distance decays exponentially along the flow",
            sup_rep.violations == 0, **_fields(sup_rep))
    rep.add("exp-decay-metric-bound",
            "metric distance decays exponentially along the flow",
            met_rep.violations == 0, **_fields(met_rep))

    sec_rep, win_rep = run_section_suite(
        instance, k, max(5, samples // 40), seed + 3, config=config
    )
    rep.add("section-flow-estimate",
            "section points of equal target contract along the flow",
            sec_rep.violations == 0, **_fields(sec_rep))
    rep.add("section-time-window",
            "section times sit in the pinned window",
            win_rep.violations == 0, **_fields(win_rep))

    grid = [i / 10 for i in range(0, 101)]
    rate = check_rate_inequalities(constants.lam, constants.T, grid)
    rep.add("rate-coefficient-inequalities",
            "the three elementary coefficient inequalities hold on the grid",
            rate.violations == 0, **_fields(rate))

    chain_bad = 0
    for _ in range(max(10, samples // 20)):
        a = random_vertex(instance, rng, 3)
        b = random_vertex(instance, rng, 3)
        c = random_point(instance, rng, 0.5, 3)
        t = Fraction(rng.randint(-16, 16), 4)
        s = Fraction(rng.randint(-16, 16), 4)
        tau = Fraction(rng.randint(-16, 16), 4)
        if tau0(instance, a, b, c, t, s) != \
                tau0_alternative(instance, a, b, c, t, s):
            chain_bad += 1
        for name, ok in product_identity_chain(instance, a, b, c, t, s, tau):
            if not ok:
                chain_bad += 1
    rep.add("time-shift-identities",
            "the exact identity chain behind the time shift",
            chain_bad == 0, violations=chain_bad)
    return rep


def _fields(estimate_report) -> dict:
    d = estimate_report.as_dict()
    return {"samples": d["samples"], "violations": d["violations"],
            "worst_margin": d["worst_margin"]}


def _random_flow_point(instance: ComplexInstance, rng: random.Random):
    kind = rng.random()
    max_len = min(instance.radius, 4)
    if kind < 0.2:
        return at_vertex(random_vertex(instance, rng, max_len))
    while True:
        a = random_point(instance, rng, 0.4, max_len)
        b = random_point(instance, rng, 0.4, max_len)
        if not is_interior(a) and not is_interior(b) and points_equal(a, b):
            continue
        t = Fraction(rng.randint(-24, 24), 4)
        return make_point(instance, a, b, t)


# ---------------------------------------------------------------------------
# decay curve data
# ---------------------------------------------------------------------------


def decay_curve(instance: ComplexInstance, k: EstimateConstants,
                seed: int = 0, taus: Sequence[float] = tuple(range(0, 13)),
                config: FSConfig = DEFAULT_CONFIG) -> List[Tuple]:
    """(tau, measured metric distance, bound) rows for one seeded pair."""
    from .estimates import check_exponential_metric, tau0 as _tau0
    rng = random.Random(seed)
    a = random_vertex(instance, rng, 3)
    b = random_vertex(instance, rng, 3)
    c = random_boundary_point(instance, rng, 2, 2)
    t = Fraction(1, 2)
    s = Fraction(-1, 3)
    rows = []
    t0 = _tau0(instance, a, b, c, t, s)
    for tau in taus:
        margin = check_exponential_metric(instance, a, b, c, t, s, tau, k,
                                          config)
        exponent = float(t) - float(instance.double_difference(
            a, c, b, instance.base_point))
        bound = k.metric_coefficient * k.lam ** exponent * k.lam ** tau
        rows.append((tau, bound - margin, bound))
    return rows
