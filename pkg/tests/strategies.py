"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from parabola.exact import Poly, PolyVec
from parabola.homology import RelClass
from parabola.veech import GroupWord, word_reduce

small_ints = st.integers(min_value=-20, max_value=20)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=9))


def polys(max_degree=6):
    return st.lists(rationals, max_size=max_degree + 1).map(Poly)


def polyvecs(max_degree=6):
    return st.builds(PolyVec, polys(max_degree), polys(max_degree))


def classes(max_degree=6):
    return polyvecs(max_degree).map(RelClass)


def words(max_len=12):
    return st.builds(
        word_reduce,
        st.text(alphabet="abc", max_size=max_len),
        st.sampled_from([1, -1]),
    )


def nonidentity_words(max_len=12):
    return words(max_len).filter(lambda w: len(w) > 0)


__all__ = ["classes", "GroupWord", "polys", "polyvecs", "rationals", "small_ints", "words"]
