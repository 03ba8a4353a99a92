"""Extended reals with the arithmetic conventions used throughout.

Finite values are kept exact (int / Fraction) wherever the caller supplies
exact input; floats are allowed and propagate.  The conventions are

    r + inf = inf + r = inf,   r - inf = -inf,   e^{-inf} = 0,
    e^{inf} = inf,             |+-inf| = inf,

and ``inf + (-inf)`` is an error (it never occurs on the admissible domains).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Finite = Union[int, float, Fraction]


class ExtReal:
    """A tagged extended real: -inf, a finite number, or +inf."""

    __slots__ = ("sign", "value")

    def __init__(self, value: Finite = 0, sign: int = 0):
        # sign: -1 for -inf, 0 for finite, +1 for +inf
        if sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        self.sign = sign
        self.value = value if sign == 0 else 0

    # -- constructors -----------------------------------------------------
    @staticmethod
    def of(x) -> "ExtReal":
        if isinstance(x, ExtReal):
            return x
        if isinstance(x, float):
            if math.isinf(x):
                return POS_INF if x > 0 else NEG_INF
            if math.isnan(x):
                raise ValueError("NaN is not an extended real")
        return ExtReal(x)

    @property
    def is_finite(self) -> bool:
        return self.sign == 0

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "ExtReal":
        if self.sign:
            return NEG_INF if self.sign > 0 else POS_INF
        return ExtReal(-self.value)

    def __add__(self, other) -> "ExtReal":
        other = ExtReal.of(other)
        if self.sign and other.sign and self.sign != other.sign:
            raise ArithmeticError("inf + (-inf) is undefined")
        if self.sign:
            return self
        if other.sign:
            return other
        return ExtReal(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other) -> "ExtReal":
        return self + (-ExtReal.of(other))

    def __rsub__(self, other) -> "ExtReal":
        return ExtReal.of(other) + (-self)

    # -- order -------------------------------------------------------------
    def _cmp(self, other) -> int:
        other = ExtReal.of(other)
        if self.sign != other.sign:
            return -1 if self.sign < other.sign else 1
        if self.sign != 0:
            return 0
        a, b = self.value, other.value
        if a == b:
            return 0
        return -1 if a < b else 1

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self.sign:
            return hash(math.inf * self.sign)
        return hash(self.value)

    def __abs__(self) -> "ExtReal":
        if self.sign:
            return POS_INF
        return ExtReal(abs(self.value))

    # -- conversions ---------------------------------------------------------
    def __float__(self) -> float:
        if self.sign:
            return math.inf * self.sign
        return float(self.value)

    def exp(self) -> "ExtReal":
        """e^x with e^{-inf} = 0 and e^{inf} = inf."""
        if self.sign < 0:
            return ExtReal(0)
        if self.sign > 0:
            return POS_INF
        return ExtReal(math.exp(float(self.value)))

    def __repr__(self):
        if self.sign > 0:
            return "ExtReal(+inf)"
        if self.sign < 0:
            return "ExtReal(-inf)"
        return f"ExtReal({self.value!r})"


NEG_INF = ExtReal(sign=-1)
POS_INF = ExtReal(sign=1)


def finite(x: Finite) -> ExtReal:
    return ExtReal(x)


def as_fraction(x: ExtReal) -> Fraction:
    if not x.is_finite:
        raise ValueError("not finite")
    return Fraction(x.value)
