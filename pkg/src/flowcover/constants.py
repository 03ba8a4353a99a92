"""The exact constants ledger driving the long-box cover induction.

All quantities are Fractions and satisfy their defining identities
exactly; the monotone chain of slack parameters is asserted at
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List


@dataclass(frozen=True)
class ConstantsLedger:
    k_G: int
    d_X: int
    alpha: Fraction
    epsilon: Fraction
    N_orbits: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not (0 < self.epsilon < self.alpha):
            raise ValueError("need 0 < epsilon < alpha")
        if self.k_G < 1 or self.d_X < 0 or self.N_orbits < 0:
            raise ValueError("bad group/dimension/orbit data")
        # the slack chain decreases strictly
        for r in range(self.N_orbits):
            assert self.delta_r(r) > self.delta_r(r + 1)
        for r in range(self.N_orbits):
            for n in range(-1, self.m):
                assert self.delta_rn(r, n) > self.delta_rn(r, n + 1)
            assert self.delta_rn(r, self.m) == self.delta_r(r + 1)

    @property
    def m(self) -> int:
        return self.k_G * (self.d_X + 1)

    @property
    def M(self) -> int:
        return self.k_G ** 2 * (self.d_X + 1) + 2 ** (self.m + 1)

    @property
    def a(self) -> Fraction:
        return self.epsilon / 2

    @property
    def b(self) -> Fraction:
        return 4 * self.M * (self.alpha + 2 * self.epsilon) \
            + 3 * (self.alpha + self.epsilon)

    @property
    def c(self) -> Fraction:
        return self.a + 2 * (self.b + self.epsilon) + 1 + self.epsilon

    @property
    def gamma(self) -> Fraction:
        return self.a + 2 * self.b + 2 * self.c

    def delta_r(self, r: int) -> Fraction:
        if not 0 <= r <= self.N_orbits:
            raise ValueError("orbit index out of range")
        return Fraction(self.N_orbits - r, self.N_orbits + 1) * self.epsilon

    @property
    def mu(self) -> Fraction:
        return self.epsilon / ((self.N_orbits + 1) * (self.m + 1))

    @property
    def eta(self) -> Fraction:
        return self.mu / 5

    def delta_rn(self, r: int, n: int) -> Fraction:
        """The layer slack: delta_r - (n+1) mu for n = -1, ..., m."""
        if not -1 <= n <= self.m:
            raise ValueError("layer index out of range")
        return self.delta_r(r) - (n + 1) * self.mu

    def delta_list(self) -> List[Fraction]:
        return [self.delta_r(r) for r in range(self.N_orbits + 1)]

    def as_dict(self) -> dict:
        return {
            "k_G": self.k_G,
            "d_X": self.d_X,
            "alpha": str(self.alpha),
            "epsilon": str(self.epsilon),
            "N_orbits": self.N_orbits,
            "m": self.m,
            "M": self.M,
            "a": str(self.a),
            "b": str(self.b),
            "c": str(self.c),
            "gamma": str(self.gamma),
            "mu": str(self.mu),
            "eta": str(self.eta),
            "delta_r": [str(d) for d in self.delta_list()],
        }


def compute_constants(k_G: int, d_X: int, alpha, epsilon,
                      N_orbits: int) -> ConstantsLedger:
    return ConstantsLedger(k_G, d_X, Fraction(alpha), Fraction(epsilon),
                           N_orbits)
