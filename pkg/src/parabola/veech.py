"""Words in the group generated by three involutions and a central sign.

Each generator acts on deformation holonomies through a 2x2 matrix over
Z[c]; a word acts through the product of its letters' matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Tuple

from .exact import C, ONE, ZERO, Poly, PolyMatrix
from .homology import AbsClass, RelClass

LETTERS = "abc"

GENERATORS = {
    "a": PolyMatrix(-ONE, ZERO, ZERO, ONE),
    "b": PolyMatrix(-ONE, Poly.constant(2), ZERO, ONE),
    "c": PolyMatrix(-C, C - 1, -C - 1, C),
}


@dataclass(frozen=True)
class GroupWord:
    letters: str = ""
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"letters must be drawn from 'abc', got {sorted(bad)}")
        if any(x == y for x, y in zip(self.letters, self.letters[1:])):
            raise ValueError(f"word {self.letters!r} is not reduced; use word_reduce")

    @classmethod
    def parse(cls, text: str) -> GroupWord:
        """Read ``[-]letters``; ``-`` alone or an empty string are allowed."""
        text = text.strip()
        sign = 1
        if text.startswith("-"):
            sign, text = -1, text[1:]
        return word_reduce(text, sign)

    def __mul__(self, other: GroupWord) -> GroupWord:
        return word_reduce(self.letters + other.letters, self.sign * other.sign)

    def inverse(self) -> GroupWord:
        return GroupWord(self.letters[::-1], self.sign)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return ("-" if self.sign < 0 else "") + self.letters


IDENTITY = GroupWord()


def word_reduce(letters: Iterable[str], sign: int = 1) -> GroupWord:
    stack = []
    for x in letters:
        if x.isspace():
            continue
        if stack and stack[-1] == x:
            stack.pop()
        else:
            stack.append(x)
    return GroupWord("".join(stack), sign)


def random_word(rng: random.Random, max_len: int, sign: bool = True) -> GroupWord:
    n = rng.randint(0, max_len)
    out = []
    for _ in range(n):
        out.append(rng.choice([x for x in LETTERS if not out or x != out[-1]]))
    return GroupWord("".join(out), rng.choice((1, -1)) if sign else 1)


@lru_cache(maxsize=4096)
def rho(w: GroupWord) -> PolyMatrix:
    m = PolyMatrix.identity()
    for x in w.letters:
        m = m @ GENERATORS[x]
    return m.scale(w.sign) if w.sign < 0 else m


def rho_at(w: GroupWord, at) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
    return rho(w).eval(at)


def det_sign(w: GroupWord) -> int:
    return -1 if len(w.letters) % 2 else 1


def is_hyperbolic(w: GroupWord) -> bool:
    m = rho(w)
    t = m.trace().eval(1)
    if det_sign(w) == 1:
        return abs(t) > 2
    return t != 0


def _checked(cls, hvec):
    if cls is AbsClass:
        return AbsClass(hvec)
    return RelClass(hvec)


def act(w: GroupWord, s: RelClass) -> RelClass:
    return _checked(type(s), rho(w) @ s.hvec)


def act_power(w: GroupWord, s: RelClass, n: int) -> RelClass:
    return _checked(type(s), pmat_power(w, n) @ s.hvec)


@lru_cache(maxsize=1024)
def pmat_power(w: GroupWord, n: int) -> PolyMatrix:
    """``rho(w)**n`` for any integer ``n``; negative powers use the adjugate."""
    return rho(w) ** n


def orbit(w: GroupWord, s: RelClass, n_max: int):
    """Yield ``(n, act_power(w, s, n))`` for ``n = 0..n_max`` by repeated action."""
    m = rho(w)
    h = s.hvec
    cls = type(s)
    for n in range(n_max + 1):
        yield n, _checked(cls, h)
        h = m @ h
