from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parabola.exact import C, Poly, PolyMatrix
from parabola.homology import AbsClass, gamma_class, hol_at, sigma_class
from parabola.pairing import pair
from parabola.veech import (
    GroupWord,
    IDENTITY,
    act,
    act_power,
    det_sign,
    is_hyperbolic,
    rho,
    rho_at,
    word_reduce,
)
from strategies import classes, words


def W(text):
    return GroupWord.parse(text)


def test_reduce_examples():
    assert word_reduce("abba", 1) == IDENTITY
    assert word_reduce("abc", -1) == GroupWord("abc", -1)
    assert word_reduce("aab c c b", 1) == IDENTITY


def test_parse_sign():
    w = W("-abcb")
    assert w.sign == -1 and w.letters == "abcb"
    with pytest.raises(ValueError):
        W("abd")
    with pytest.raises(ValueError):
        GroupWord("aa")


@pytest.mark.parametrize("x", ["a", "b", "c", "-"])
def test_involutions(x):
    assert rho(W(x)) @ rho(W(x)) == PolyMatrix.identity()


def test_rho_abc():
    m = rho(W("abc"))
    assert m == PolyMatrix(C + 2, -C - 1, -C - 1, C)
    assert m.trace() == 2 * C + 2
    assert m.det() == Poly([-1])
    # numeric oracle: product of evaluated generator matrices
    for at in (0, 1):
        ref = np.eye(2)
        for x in "abc":
            ref = ref @ np.array(rho_at(W(x), at), dtype=float)
        assert np.array_equal(np.array(rho_at(W("abc"), at), dtype=float), ref)


def test_rho_at_examples():
    assert rho_at(W("c"), 1) == ((-1, 0), (-2, 1))
    assert rho_at(W("abc"), 1) == ((3, -2), (-2, 1))
    assert rho_at(IDENTITY, 7) == ((1, 0), (0, 1))


def test_hyperbolicity_examples():
    assert not is_hyperbolic(W("ab"))
    assert is_hyperbolic(W("abc"))
    assert not is_hyperbolic(IDENTITY)


@given(words(10))
def test_hyperbolic_iff_distinct_moduli(w):
    m = np.array(rho_at(w, 1), dtype=float)
    ev = np.linalg.eigvals(m)
    # parabolic double roots split by ~sqrt(machine eps) in floating point
    real = np.all(np.abs(ev.imag) < 1e-6)
    distinct = abs(abs(ev[0]) - abs(ev[1])) > 1e-6
    assert is_hyperbolic(w) == bool(real and distinct)


@given(words(12), words(12))
def test_homomorphism(u, v):
    assert rho(u * v) == rho(u) @ rho(v)


@given(words(12))
def test_det_is_sign_of_length(w):
    assert rho(w).det() == Poly([(-1) ** len(w.letters)])
    assert det_sign(w) == (-1) ** len(w.letters)


@given(words(12))
def test_inverse_word(w):
    assert rho(w) @ rho(w.inverse()) == PolyMatrix.identity()


def test_action_examples():
    s = sigma_class(0)
    assert act(IDENTITY, s) == s
    assert hol_at(act(W("abc"), s), 1) == (1, -1)


@given(words(8), st.integers(-5, 5).filter(bool))
def test_action_preserves_absolute(w, j):
    assert isinstance(act(w, gamma_class(j)), AbsClass)


@given(words(6), classes(4), st.integers(-4, 4), st.integers(-4, 4))
def test_power_composition(w, s, m, n):
    assert act_power(w, s, m + n) == act_power(w, act_power(w, s, n), m)


@given(words(8), classes(5), classes(5))
def test_pairing_equivariance(w, x, y):
    assert pair(act(w, x), act(w, y)) == det_sign(w) * pair(x, y)
