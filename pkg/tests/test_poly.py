from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coloredkh.poly import (
    ConsistencyError, LaurentPoly, VariableMismatch, binomial_poly, jones_from_bracket, parse, render,
)
from strategies import polys_data


def P(d, var="q"):
    return LaurentPoly(d, var)


def test_zero_terms_are_dropped():
    assert P({2: 0, 1: 3}).coeffs == {1: 3}
    assert P({}).is_zero()


def test_render_examples():
    assert render(P({1: 1, -1: 1})) == "q + q^-1"
    assert render(P({2: -1, -2: -1}, "A")) == "-A^2 - A^-2"
    assert render(P({3: 2, 0: -5})) == "2*q^3 - 5"
    assert render(P({})) == "0"


def test_loop_values():
    assert binomial_poly("q") == P({1: 1, -1: 1})
    assert binomial_poly("A") == P({2: -1, -2: -1}, "A")


def test_mixing_variables_is_an_error():
    with pytest.raises(VariableMismatch):
        P({1: 1}, "q") + P({1: 1}, "A")


def test_bracket_of_a_loop_gives_the_unknot():
    assert jones_from_bracket(binomial_poly("A"), 0) == binomial_poly("q")


def test_odd_exponent_after_normalisation_is_rejected():
    with pytest.raises(ConsistencyError):
        jones_from_bracket(P({1: 1}, "A"), 0)


@given(polys_data)
def test_render_parse_roundtrip(d):
    p = P(d)
    assert parse(render(p)) == p


@given(polys_data, polys_data, polys_data)
def test_ring_axioms(a, b, c):
    x, y, z = P(a), P(b), P(c)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x - x == P({})


@given(polys_data, st.integers(0, 3))
def test_power_matches_repeated_product(d, n):
    x = P(d)
    acc = LaurentPoly.one()
    for _ in range(n):
        acc = acc * x
    assert x**n == acc


@given(polys_data, st.integers(-5, 5))
def test_shift_is_monomial_product(d, k):
    assert P(d).shift(k) == P(d) * LaurentPoly.monomial(k)


def test_big_integer_coefficients_are_exact():
    x = P({1: 1, 0: 1})
    assert (x**80)[40] == comb(80, 40)
