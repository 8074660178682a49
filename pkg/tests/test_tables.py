import pytest

from coloredkh.tables import (
    TABLES, classify_local, comult, covers_all_labels, degree, f_map, f_pairs, mult, replay, replay_all,
)

ERRATA_ROWS = {(11, 2), (15, 0), (15, 1), (15, 3)}


def test_frobenius_rules():
    assert mult("1", "1") == ["1"] and mult("1", "x") == ["x"] and mult("x", "x") == []
    assert sorted(comult("1")) == sorted([("1", "x"), ("x", "1")])
    assert comult("x") == [("x", "x")]


@pytest.mark.parametrize("number", sorted(TABLES))
def test_corrected_rows_replay(number):
    bad = [r for r in replay(TABLES[number]) if not r.ok]
    assert not bad, bad


@pytest.mark.parametrize("number", sorted(TABLES))
def test_rows_cover_every_labelling(number):
    assert covers_all_labels(TABLES[number])


def test_printed_inconsistencies_are_exactly_the_recorded_errata():
    bad = {(r.table, r.index) for r in replay_all(printed=True) if not r.ok}
    assert bad == ERRATA_ROWS
    recorded = {n for n, tb in TABLES.items() if tb.errata}
    assert {t for t, _ in bad} == recorded


@pytest.mark.parametrize("number", sorted(TABLES))
def test_panel_swap_preserves_degree(number):
    for (s, b_code, b_labels), (a_code, a_labels) in f_pairs(number).items():
        assert degree(a_labels) == degree(b_labels)
        assert f_map(number, s, b_code, b_labels) == (a_code, a_labels)
        assert classify_local(number, a_labels) is not None
