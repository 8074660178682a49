import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from coloredkh.pairing import (
    Pairing, apply_diff, edge_sign, enumerate_pairings, pairing_count, pairing_diff, shapes_up_to,
)

SHAPES = list(shapes_up_to(10))


@pytest.mark.parametrize("shape", SHAPES, ids=str)
def test_enumeration_matches_brute_force_and_formula(shape):
    for k in range(sum(shape) // 2 + 2):
        got = enumerate_pairings(shape, k)
        assert [p.edges for p in got] == oracles.pairings(shape, k)
        assert len(got) == pairing_count(shape, k)


def test_level_splits():
    assert [len(enumerate_pairings((4,), k)) for k in range(3)] == [1, 3, 1]
    assert [len(enumerate_pairings((2, 3), k)) for k in range(3)] == [1, 3, 2]


@pytest.mark.parametrize("shape", SHAPES, ids=str)
def test_pairing_differential_squares_to_zero(shape):
    for k in range(sum(shape) // 2):
        for s in enumerate_pairings(shape, k):
            assert apply_diff(pairing_diff(s)) == {}
            assert apply_diff(apply_diff({s: 1}, signed=False), signed=False) == {}


@given(st.sampled_from(SHAPES), st.data())
def test_reduced_shape_and_admissible(shape, data):
    k = data.draw(st.integers(0, sum(v // 2 for v in shape)))
    ps = enumerate_pairings(shape, k)
    s = data.draw(st.sampled_from(ps))
    assert sum(s.reduced_shape()) == sum(shape) - 2 * k
    for e in s.admissible():
        t = s.add(e)
        assert t.k == k + 1
        assert edge_sign(t, e) in (1, -1)


def test_overlapping_edges_rejected():
    with pytest.raises(ValueError):
        Pairing.of((4,), [(1, 1), (1, 2)])
    with pytest.raises(ValueError):
        Pairing.of((2,), [(1, 2)])


def test_strand_of_skips_covered_dots():
    s = Pairing.of((5,), [(1, 1)])
    assert s.strand_of((1, 3)) == (1, 0)
    assert s.strand_of((1, 4)) == (1, 1)
