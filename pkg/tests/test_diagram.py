import json

import pytest
from hypothesis import given

from coloredkh import corpus
from coloredkh.diagram import (
    DiagramError, canonical_renumber, ensure_valid, from_json, mirror, smooth_oriented,
    switch_crossing, to_json, validate_diagram, with_base_arcs, writhe,
)
from coloredkh.state import state_sum_jones
from strategies import diagrams


@pytest.mark.parametrize("name", sorted(corpus.NAMED))
def test_corpus_diagrams_validate(name):
    assert validate_diagram(corpus.get(name)).ok


@pytest.mark.parametrize("name", sorted(corpus.NAMED))
def test_json_roundtrip(name):
    d = corpus.get(name)
    assert from_json(to_json(d)) == d


def test_malformed_documents_raise():
    for text in ("not json", "[]", '{"crossings": []}', '{"components": 1, "crossings": [{"id": 0}]}'):
        with pytest.raises(DiagramError):
            from_json(text)


def test_arc_used_once_is_reported():
    doc = json.loads(to_json(corpus.get("trefoil")))
    doc["crossings"][0]["arcs"][0] = 99
    rep = validate_diagram(from_json(json.dumps(doc)))
    assert not rep.ok
    with pytest.raises(DiagramError):
        ensure_valid(from_json(json.dumps(doc)))


def test_writhe_values():
    assert writhe(corpus.get("trefoil")) == 3
    assert writhe(corpus.get("figure-eight")) == 0
    assert writhe(corpus.get("negative-hopf")) == -2


@given(diagrams())
def test_mirror_inverts_q(d):
    a = state_sum_jones(d).coeffs
    b = state_sum_jones(mirror(d)).coeffs
    assert b == {-e: c for e, c in a.items()}


@given(diagrams())
def test_renumbering_keeps_jones(d):
    assert state_sum_jones(canonical_renumber(d)) == state_sum_jones(d)


@given(diagrams())
def test_switch_twice_is_identity(d):
    for x in d.crossings:
        assert switch_crossing(switch_crossing(d, x.id), x.id) == d


def test_base_arc_must_lie_on_component():
    d = corpus.get("kink")
    assert with_base_arcs(d, [2]).base_arcs == (2,)


def test_oriented_smoothing_of_kink_gives_two_loops():
    d = smooth_oriented(corpus.get("kink"), corpus.get("kink").crossings[0].id)
    assert d.n_components == 2 and not d.crossings
