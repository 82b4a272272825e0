from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parabola.errors import DegreeTooHigh, NotAbsolute, OutsideSpan, ZeroIndex
from parabola.exact import PolyVec
from parabola.homology import (
    AbsClass,
    RelClass,
    class_json,
    epsilon,
    from_gamma,
    from_sigma,
    gamma_class,
    gamma_coords,
    hol_at,
    parse_class,
    sigma_class,
    sigma_coords,
)
from parabola.surface import vertex
from strategies import polyvecs, rationals


def test_sigma_examples():
    assert sigma_class(0).hvec == PolyVec.of(1, 1)
    assert sigma_class(-1).hvec == PolyVec.of(1, -1)
    assert sigma_class(1).hvec == PolyVec.of([-1, 2], [1, 2])
    assert sigma_class(1).hvec == vertex(2).position - vertex(1).position


@pytest.mark.parametrize("j", range(-3, 4))
def test_sigma_at_minus_one(j):
    sign = (-1) ** (j % 2)
    assert hol_at(sigma_class(j), -1) == (sign * (2 * j + 1), sign)


def test_gamma_examples():
    assert hol_at(gamma_class(1), 1) == (2, 4)
    assert hol_at(gamma_class(-1), 1) == (-2, 0)
    with pytest.raises(ZeroIndex):
        gamma_class(0)


@pytest.mark.parametrize("j", range(-4, 5))
def test_epsilon_of_sigma(j):
    assert epsilon(sigma_class(j)) == (-1) ** (j % 2)


@pytest.mark.parametrize("j", [-9, -3, -1, 1, 2, 7])
def test_epsilon_of_gamma(j):
    assert epsilon(gamma_class(j)) == 0


def test_epsilon_is_additive_example():
    assert epsilon(sigma_class(0) + sigma_class(1)) == 0


def test_hol_at_third_root():
    assert hol_at(sigma_class(1), Fraction(-1, 2)) == (-2, 0)


def test_sigma_coords_examples():
    assert sigma_coords(sigma_class(3), 3) == {3: 1}
    s = RelClass(PolyVec.of(1, 1) + PolyVec.of(1, -1))
    assert sigma_coords(s, 0) == {-1: 1, 0: 1}
    g = gamma_class(1)
    coords = sigma_coords(g, 1)
    assert from_sigma(coords).hvec == g.hvec


def test_sigma_coords_degree_guard():
    with pytest.raises(DegreeTooHigh):
        sigma_coords(sigma_class(4), 2)


@given(polyvecs(10))
def test_round_trip(h):
    s = RelClass(h)
    coords = sigma_coords(s, max(h.degree, 0) + 1)
    assert from_sigma(coords).hvec == h


@pytest.mark.parametrize("k", range(1, 12))
def test_leading_term(k):
    x = sigma_class(k).hvec.x
    assert x.degree == k and x.coeffs[-1] == 2**k
    assert sigma_class(-k - 1).hvec.degree == k


@given(st.dictionaries(st.integers(-8, 8).filter(bool), rationals, max_size=5))
def test_gamma_combinations_are_absolute(coords):
    total = from_gamma(coords)
    assert isinstance(total, AbsClass)
    assert epsilon(total) == 0
    back = gamma_coords(total, 8)
    assert {k: v for k, v in coords.items() if v} == back


def test_abs_class_rejects_relative():
    with pytest.raises(NotAbsolute):
        AbsClass(sigma_class(0).hvec)
    with pytest.raises(NotAbsolute):
        gamma_coords(sigma_class(0), 3)


def test_gamma_coords_span_bound():
    with pytest.raises(OutsideSpan):
        gamma_coords(gamma_class(5), 3)


@given(polyvecs(5), polyvecs(5), rationals)
def test_epsilon_is_linear(u, v, q):
    a, b = RelClass(u), RelClass(v)
    assert epsilon(a + b * q) == epsilon(a) + q * epsilon(b)


def test_json_forms():
    s = parse_class({"sigma": {"0": "1", "-1": "2/3"}})
    assert s.hvec == sigma_class(0).hvec + sigma_class(-1).hvec * Fraction(2, 3)
    g = parse_class({"gamma": {"2": "1"}})
    assert isinstance(g, AbsClass)
    out = class_json(g)
    assert "hvec" in out and out["kind"] == "absolute"
    assert parse_class({"hvec": out["hvec"]}).hvec == g.hvec
    with pytest.raises(ValueError):
        parse_class({"tau": {}})
    with pytest.raises(ValueError):
        parse_class({})


def test_class_arithmetic_kinds():
    g = gamma_class(1) + gamma_class(2)
    assert isinstance(g, AbsClass)
    r = gamma_class(1) + sigma_class(0)
    assert not isinstance(r, AbsClass)
    assert isinstance(-gamma_class(1), AbsClass)
    assert isinstance(gamma_class(1) * 3, AbsClass)
