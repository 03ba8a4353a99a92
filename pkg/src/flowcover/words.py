"""Reduced words over the generators of a free group.

A word is a tuple of nonzero ints: ``i`` is the i-th generator, ``-i`` its
inverse.  The serialized form uses the alphabet ``a1..ak`` / ``A1..Ak``
(capital letter = inverse), e.g. ``a1A2a1``.  The empty word serializes
as ``""``.
"""

from __future__ import annotations

import re
from typing import Iterable, Tuple

Word = Tuple[int, ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"([aA])(\d+)")


def reduce_word(letters: Iterable[int]) -> Word:
    """Freely reduce a letter sequence (cancel adjacent x, x^{-1})."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Word) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def concat(u: Word, v: Word) -> Word:
    """Reduced product u * v."""
    return reduce_word(list(u) + list(v))


def invert(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def common_prefix_len(u: Word, v: Word) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u[i] != v[i]:
            return i
    return n


def word_to_str(w: Word) -> str:
    return "".join((f"a{x}" if x > 0 else f"A{-x}") for x in w)


def str_to_word(s: str) -> Word:
    s = s.strip()
    if not s:
        return EMPTY
    pos = 0
    letters = []
    for m in _TOKEN.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse word {s!r} at offset {pos}")
        idx = int(m.group(2))
        if idx == 0:
            raise ValueError("generator indices start at 1")
        letters.append(idx if m.group(1) == "a" else -idx)
        pos = m.end()
    if pos != len(s):
        raise ValueError(f"cannot parse word {s!r} at offset {pos}")
    w = tuple(letters)
    if not is_reduced(w):
        raise ValueError(f"word {s!r} is not reduced")
    return w


def max_generator(w: Word) -> int:
    return max((abs(x) for x in w), default=0)
