import numpy as np
from hypothesis import given
from hypothesis import strategies as st

import oracles
from coloredkh.linalg import LARGE_PRIME, dense_smith, rank_mod_p, rank_over, smith_invariants


@st.composite
def int_matrices(draw, max_dim=6, lo=-3, hi=3):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    return [[draw(st.integers(lo, hi)) for _ in range(c)] for _ in range(r)]


def coo(m):
    a = np.array(m, dtype=np.int64).reshape(len(m), len(m[0]) if m else 0)
    r, c = np.nonzero(a)
    return r, c, a[r, c], a.shape


@given(int_matrices())
def test_rank_mod_large_prime_is_rational_rank(m):
    assert rank_mod_p(*coo(m), LARGE_PRIME) == oracles.rank_q(m)


@given(int_matrices())
def test_rank_mod_two_against_reduction(m):
    reduced = [[v % 2 for v in row] for row in m]
    r, c, v, shape = coo(reduced)
    # independent GF(2) elimination on python ints
    rows = [int("".join(str(x) for x in row), 2) if row else 0 for row in reduced]
    rank = 0
    while rows:
        pivot = max(rows)
        rows.remove(pivot)
        if not pivot:
            break
        rank += 1
        top = pivot.bit_length() - 1
        rows = [x ^ pivot if x >> top & 1 else x for x in rows]
    assert rank_mod_p(r, c, v, shape, 2) == rank


@given(int_matrices(max_dim=5, lo=-6, hi=6))
def test_smith_against_sympy(m):
    want = oracles.smith(m)
    assert sorted(smith_invariants(*coo(m))) == want
    assert sorted(v for v in dense_smith(m) if v) == want


def test_torsion_example():
    m = [[2, 0], [0, 6]]
    assert sorted(smith_invariants(*coo(m))) == [2, 6]
    assert rank_over(*coo(m), "Z2") == 0
