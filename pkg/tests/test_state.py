import pytest
from hypothesis import given

import oracles
from coloredkh import corpus
from coloredkh.diagram import smooth_oriented, switch_crossing
from coloredkh.poly import LaurentPoly, jones_from_bracket
from coloredkh.diagram import writhe
from coloredkh.state import (
    enhanced_state_sum_jones, kauffman_bracket, state_space, state_sum_jones,
)
from strategies import diagrams

NAMES = sorted(corpus.NAMED)


@pytest.mark.parametrize("name", NAMES)
def test_jones_against_independent_state_sum(name):
    d = corpus.get(name)
    assert oracles.to_sympy(state_sum_jones(d)) == oracles.jones(d)


@pytest.mark.parametrize("name", NAMES)
def test_bracket_against_independent_state_sum(name):
    d = corpus.get(name)
    assert oracles.to_sympy(kauffman_bracket(d)) == oracles.bracket(d)


@given(diagrams())
def test_three_routes_to_jones_agree(d):
    a = state_sum_jones(d)
    assert jones_from_bracket(kauffman_bracket(d), writhe(d)) == a
    assert enhanced_state_sum_jones(d) == a


def test_literal_values():
    assert state_sum_jones(corpus.get("unknot")) == LaurentPoly({1: 1, -1: 1})
    assert kauffman_bracket(corpus.get("unknot")) == LaurentPoly({2: -1, -2: -1}, "A")
    assert state_sum_jones(corpus.get("empty")) == LaurentPoly.one()
    assert state_sum_jones(corpus.get("trefoil")) == LaurentPoly({1: 1, 3: 1, 5: 1, 9: -1})


def conway_triples():
    for name in ("trefoil", "figure-eight", "hopf", "negative-hopf", "cinquefoil", "kink", "torus-link-2-4"):
        d = corpus.get(name)
        for x in d.crossings:
            plus = d if x.sign > 0 else switch_crossing(d, x.id)
            minus = switch_crossing(plus, x.id)
            yield name, x.id, plus, minus, smooth_oriented(d, x.id)


@pytest.mark.parametrize("name,cid,plus,minus,zero", list(conway_triples()))
def test_jones_skein(name, cid, plus, minus, zero):
    lhs = state_sum_jones(plus).shift(-2) - state_sum_jones(minus).shift(2)
    rhs = state_sum_jones(zero) * LaurentPoly({-1: 1, 1: -1})
    assert lhs == rhs


@pytest.mark.parametrize("name", [n for n in NAMES if corpus.get(n).crossings])
def test_bracket_skein_at_every_crossing(name):
    d = corpus.get(name)
    full = oracles.to_sympy(kauffman_bracket(d))
    for x in d.crossings:
        a = oracles.bracket(d, {x.id: 0})
        b = oracles.bracket(d, {x.id: 1})
        # the oracle already weights the forced crossing by nothing
        assert full == (oracles.A * a + b / oracles.A).expand()


def test_grading_of_all_zero_state():
    sp = state_space(corpus.get("trefoil"))
    assert sp.i_grade(0) == 0
