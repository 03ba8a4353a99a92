"""Small standalone demonstrators for the box-construction ingredients.

* the logarithmic time-calibration function on a planar shift flow, whose
  defining identity psi(flow_delta(y)) = delta + psi(y) witnesses how
  transversal slices are produced from bump functions;
* the non-compact pseudo-box whose entry/exit times jump, showing why
  boxes are required to be compact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

from scipy.integrate import quad


# ---------------------------------------------------------------------------
# the psi demonstrator (planar flow (x, y) -> (x + tau, y))
# ---------------------------------------------------------------------------


def bump(x: float, y: float) -> float:
    """1 on the unit square, 0 outside the 3/2 square, linear between."""
    r = max(abs(x), abs(y))
    if r <= 1.0:
        return 1.0
    if r >= 1.5:
        return 0.0
    return (1.5 - r) / 0.5


def psi(y_point: Tuple[float, float], alpha: float = 2.0,
        f: Callable[[float, float], float] = bump) -> float:
    x, y = y_point
    val, _ = quad(lambda tau: f(x + tau, y) * math.exp(-tau),
                  -alpha, alpha, limit=200,
                  points=[p - x for p in (-1.5, -1.0, 1.0, 1.5)
                          if -alpha < p - x < alpha])
    return math.log(val)


def check_psi_shift_identity(samples: int = 25, eps: float = 0.25,
                             alpha: float = 2.0,
                             tol: float = 1e-9) -> Tuple[int, float]:
    """Verify psi(flow_delta(y)) = delta + psi(y) for points of the core
    square and |delta| <= eps; returns (violations, worst error).

    The identity needs the bump to vanish on the time bands swept past the
    integration limits, which holds here since the support has radius 3/2
    and alpha - eps > 3/2 + core radius.
    """
    worst = 0.0
    bad = 0
    k = 0
    for i in range(samples):
        x0 = -0.1 + 0.2 * (i % 5) / 4
        y0 = -0.1 + 0.2 * ((i // 5) % 5) / 4
        base = psi((x0, y0), alpha)
        for delta in (-eps, -eps / 2, eps / 3, eps):
            err = abs(psi((x0 + delta, y0), alpha) - (delta + base))
            worst = max(worst, err)
            if err > tol:
                bad += 1
            k += 1
    return bad, worst


# ---------------------------------------------------------------------------
# the non-compact pseudo-box with discontinuous entry/exit times
# ---------------------------------------------------------------------------


def pseudo_box_contains(x: float, y: float) -> bool:
    """A set satisfying every box requirement except compactness: the
    square with the segment y = 0 replaced by a shifted one."""
    if -1.0 <= x <= 1.0 and -1.0 <= y <= 1.0 and y != 0.0:
        return True
    return y == 0.0 and 0.0 <= x <= 2.0


def exit_time(contains: Callable[[float, float], bool], x: float, y: float,
              step: float = 1e-3, bound: float = 8.0) -> float:
    """Largest tau >= 0 with the flow up to tau staying inside, scanned at
    the given resolution."""
    if not contains(x, y):
        raise ValueError("point outside the set")
    tau = 0.0
    while tau <= bound and contains(x + tau + step, y):
        tau += step
    return tau


def detect_exit_time_jump(contains: Callable[[float, float], bool] =
                          pseudo_box_contains,
                          x: float = 0.0, probe: float = 1e-6,
                          threshold: float = 0.5) -> bool:
    """True iff the exit time jumps across the line y = 0 at the given x:
    the signature of the missing compactness."""
    t_above = exit_time(contains, x, probe)
    t_on = exit_time(contains, x, 0.0)
    t_below = exit_time(contains, x, -probe)
    return abs(t_on - t_above) > threshold or abs(t_on - t_below) > threshold
