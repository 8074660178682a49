import pytest
from hypothesis import given
from hypothesis import strategies as st

from coloredkh import corpus
from coloredkh.bicomplex import cable_of
from coloredkh.cabling import cable, cable_crossing_count, contract_type1, strand_count
from coloredkh.diagram import DiagramError, validate_diagram, writhe
from coloredkh.poly import LaurentPoly
from coloredkh.state import state_sum_jones

CASES = [("kink", (3,)), ("kink", (4,)), ("hopf", (3, 1)), ("hopf", (2, 2)), ("trefoil", (2,)),
         ("figure-eight", (3,)), ("double-kink", (4,)), ("negative-kink", (3,)), ("r2-unlink", (2, 2))]


@pytest.mark.parametrize("name,n", CASES)
def test_cable_is_valid_with_expected_size(name, n):
    d = corpus.get(name)
    dc = cable_of(d, n)
    assert validate_diagram(dc).ok
    assert len(dc.crossings) == cable_crossing_count(d, n)
    assert dc.n_components == sum(n)
    for c, m in enumerate(n):
        assert strand_count(dc, c) == m


def test_single_strand_cable_keeps_jones():
    for name in ("trefoil", "figure-eight", "hopf", "kink"):
        d = corpus.get(name)
        assert state_sum_jones(cable_of(d, (1,) * d.n_components)) == state_sum_jones(d)


def test_cable_of_a_loop_is_parallel_loops():
    loop = LaurentPoly({1: 1, -1: 1})
    for n in range(4):
        assert state_sum_jones(cable_of(corpus.get("unknot"), (n,))) == loop**n


@given(st.sampled_from(["parallel", "alternating"]), st.integers(1, 3))
def test_writhe_scales_with_strands(orientation, m):
    d = corpus.get("trefoil")
    dc = cable(d, (m,), orientation)
    # each original crossing becomes m^2 crossings; parallel strands keep its sign
    if orientation == "parallel":
        assert writhe(dc) == m * m * writhe(d)


@pytest.mark.parametrize("name,n", CASES)
def test_contraction_gives_smaller_cable_with_even_circle_count(name, n):
    d = corpus.get(name)
    dc = cable_of(d, n)
    for comp, m in enumerate(n):
        for p in range(1, m):
            for direction in (1, -1):
                small, circles = contract_type1(dc, comp, (p, p + 1), direction)
                assert circles % 2 == 0
                red = list(n)
                red[comp] -= 2
                ref = cable_of(d, tuple(red)) if any(red) else corpus.get("empty")
                assert state_sum_jones(small) == state_sum_jones(ref)
                assert writhe(small) == writhe(ref)


def test_contraction_needs_adjacent_strands():
    dc = cable_of(corpus.get("kink"), (3,))
    with pytest.raises(DiagramError):
        contract_type1(dc, 0, (1, 3))
    with pytest.raises(DiagramError):
        contract_type1(corpus.get("kink"), 0, (1, 2))
