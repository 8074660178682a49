from collections import Counter
from math import comb

import numpy as np
import pytest

from coloredkh import corpus
from coloredkh.bicomplex import cable_of, classify_enhanced, rho
from coloredkh.cabling import ContractedStrands, contract_type1
from coloredkh.diagram import DiagramError
from coloredkh.khovanov import cube, differential_matrix
from coloredkh.poly import LaurentPoly
from coloredkh.retraction import find_r2_sites, require_site, rho_matrix
from coloredkh.state import EnhancedState, state_space, state_sum_jones

R2 = ["double-kink", "r2-unlink"]


def sites(name):
    d = corpus.get(name)
    return [(d, s) for s in find_r2_sites(d)]


def test_sites_found():
    assert len(find_r2_sites(corpus.get("double-kink"))) == 1
    # on the sphere all four faces of this diagram are bigons
    assert len(find_r2_sites(corpus.get("r2-unlink"))) == 4
    assert find_r2_sites(corpus.get("trefoil")) == []
    with pytest.raises(DiagramError):
        require_site(corpus.get("trefoil"), 0, 1)


@pytest.mark.parametrize("d,site", [p for n in R2 for p in sites(n)])
def test_rho_is_an_idempotent_chain_map(d, site):
    cx = cube(d)
    for i, j in cx.gradings():
        r = rho_matrix(d, site, i, j)
        assert np.array_equal(r @ r, r)
        if cx.size(i + 1, j):
            dm = differential_matrix(d, i, j).to_dense()
            assert np.array_equal(dm @ r, rho_matrix(d, site, i + 1, j) @ dm)


@pytest.mark.parametrize("d,site", [p for n in R2 for p in sites(n)])
def test_image_has_the_jones_polynomial(d, site):
    acc = {}
    for i, j in cube(d).gradings():
        rank = int(np.linalg.matrix_rank(rho_matrix(d, site, i, j).astype(float)))
        acc[j] = acc.get(j, 0) + (-rank if i % 2 else rank)
    assert LaurentPoly(acc) == state_sum_jones(d)


def test_mod_two_form_on_a_straight_state():
    d = corpus.get("r2-unlink")
    site = next(s for s in find_r2_sites(d) if s.straight == (1, 0))
    sp = state_space(d)
    mask = 1 << site.k1
    owner, n = sp.circles(mask)
    st = EnhancedState(mask, 0b10, n)       # labels 1, x
    image = {k: v % 2 for k, v in rho(d, site, st).items() if v % 2}
    assert image.pop(st) == 1
    (other, c), = image.items()
    assert c == 1
    assert (other.mask >> site.k1 & 1, other.mask >> site.k2 & 1) == site.circle
    small = sp.circles(other.mask)[0][site.inner[0]]
    assert other.labels >> small & 1 == 0   # the cut-off circle carries 1
    assert bin(other.labels).count("1") == 1


@pytest.mark.parametrize("name,n", [("kink", (2,)), ("kink", (3,)), ("hopf", (2, 1)), ("trefoil", (2,))])
def test_type1_state_count(name, n):
    d = corpus.get(name)
    dc = cable_of(d, n)
    small, circles = contract_type1(dc, 0, (1, 2), 1)
    cs = ContractedStrands(0, 1, 1)
    sp = state_space(dc)
    verdicts = Counter()
    for mask in sp.masks():
        c = sp.n_circles(mask)
        for lab in range(1 << c):
            v = classify_enhanced(dc, cs, EnhancedState(mask, lab, c))
            verdicts[v.verdict] += 1
            assert (v.sign == 1) == v.is_type1
    small_states = sum(1 << state_space(small).n_circles(m) for m in state_space(small).masks())
    assert verdicts["Type1j"] == small_states * comb(circles, circles // 2)
