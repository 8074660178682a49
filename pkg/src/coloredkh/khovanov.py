"""Khovanov chain complexes over Z2 and Z, homology, Euler characteristics.

Generators of a slice ``C^{i,j}`` are enhanced states ordered by marker mask
and then by label mask; within a mask the label masks with a fixed number of
x's are indexed by their combinatorial rank, so no lookup tables are needed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import _kernels as K
from .diagram import LinkDiagram
from .linalg import LARGE_PRIME, rank_mod_p, smith_invariants
from .poly import ConsistencyError, LaurentPoly
from .state import EnhancedState, state_space

RINGS = ("Z2", "Z")


def normalize_ring(ring: str) -> str:
    r = ring.upper()
    if r not in RINGS:
        raise ValueError(f"unknown ring {ring!r}; expected Z2 or Z")
    return r


class CubeComplex:
    """Numba-side circle tables for one diagram, shared by all slices."""

    def __init__(self, d: LinkDiagram):
        sp = state_space(d)
        self.diagram = d
        self.space = sp
        self.n = sp.n
        self.w = sp.w
        self.n_neg = sp.n_neg
        n_arcs = len(sp.arcs)
        ja = np.zeros((max(self.n, 1), 2, 2), dtype=np.int64)
        jb = np.zeros((max(self.n, 1), 2, 2), dtype=np.int64)
        arcs_of = np.zeros((max(self.n, 1), 4), dtype=np.int64)
        for k, (ap, bp) in enumerate(sp._joins):
            ja[k] = ap
            jb[k] = bp
            arcs_of[k] = [sp.arc_index[a] for a in sp.crossings[k].arcs]
        self.arcs_of = arcs_of
        self.owner, self.ncirc, self.reps = K.circle_tables(
            self.n, n_arcs, ja, jb, sp.free_circles
        )
        if int(self.ncirc.max(initial=0)) > K.MAX_CIRCLES:
            raise ValueError("too many circles for the label bit mask")
        self.binom = K.binom_table(K.MAX_CIRCLES + 2)
        self.popcounts = np.array([bin(m).count("1") for m in range(1 << self.n)], dtype=np.int64)
        self._slices: dict[tuple[int, int], tuple[np.ndarray, int, np.ndarray]] = {}

    def x_counts(self, i: int, j: int) -> np.ndarray:
        tau = j - self.w - i
        c = self.ncirc.astype(np.int64)
        diff = c - tau
        x = np.where(diff % 2 == 0, diff // 2, -1)
        x = np.where((x < 0) | (x > c), -1, x)
        x = np.where(self.popcounts == i + self.n_neg, x, -1)
        return x

    def slice(self, i: int, j: int):
        key = (i, j)
        hit = self._slices.get(key)
        if hit is None:
            x = self.x_counts(i, j)
            off, total = K.slice_offsets(self.n, self.ncirc, i + self.n_neg, x, self.binom)
            hit = (off, int(total), x)
            self._slices[key] = hit
        return hit

    def size(self, i: int, j: int) -> int:
        if not -self.n_neg <= i <= self.n - self.n_neg:
            return 0
        return self.slice(i, j)[1]

    def gradings(self) -> list[tuple[int, int]]:
        """All (i, j) with a nonzero chain group, sorted."""
        seen = set()
        pairs = set(zip(self.popcounts.tolist(), self.ncirc.tolist()))
        for neg, c in pairs:
            i = neg - self.n_neg
            for x in range(c + 1):
                seen.add((i, self.w + i + c - 2 * x))
        return sorted(seen)

    def rank_table(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for neg, c in zip(self.popcounts.tolist(), self.ncirc.tolist()):
            i = neg - self.n_neg
            for x in range(c + 1):
                out[(i, self.w + i + c - 2 * x)] += int(self.binom[c, x])
        return dict(out)

    def coo(self, i: int, j: int):
        """Integer entries of d : C^{i,j} -> C^{i+1,j} as (rows, cols, vals, shape)."""
        src_off, n_src, x_src = self.slice(i, j)
        tgt_off, n_tgt, _ = self.slice(i + 1, j)
        if n_src == 0 or n_tgt == 0:
            e = np.zeros(0, dtype=np.int64)
            return e, e, e, (n_tgt, n_src)
        rows, cols, vals = K.differential_coo(
            self.n, self.arcs_of, self.owner, self.ncirc, self.reps,
            src_off, tgt_off, x_src, self.binom,
        )
        return rows, cols, vals, (n_tgt, n_src)

    def generators(self, i: int, j: int) -> Iterator[EnhancedState]:
        off, total, x = self.slice(i, j)
        for mask in np.nonzero(off >= 0)[0].tolist():
            c = int(self.ncirc[mask])
            for labels in _labels_with(c, int(x[mask])):
                yield EnhancedState(mask, labels, c)

    def index_of(self, st: EnhancedState, i: int, j: int) -> int:
        off = self.slice(i, j)[0]
        base = int(off[st.mask])
        if base < 0:
            raise KeyError("state not in this slice")
        return base + int(K.colex_rank(st.labels, self.binom))


def _labels_with(c: int, x: int) -> Iterator[int]:
    if x == 0:
        yield 0
        return
    v = (1 << x) - 1
    while v < 1 << c:
        yield v
        t = v | (v - 1)
        v = (t + 1) | (((~t & -~t) - 1) >> ((v & -v).bit_length()))


@lru_cache(maxsize=16)
def cube(d: LinkDiagram) -> CubeComplex:
    return CubeComplex(d)


@dataclass
class ChainBasis:
    diagram: LinkDiagram
    grading: tuple[int, int]
    ring: str
    size: int

    @property
    def states(self) -> list[EnhancedState]:
        return list(cube(self.diagram).generators(*self.grading))

    def __len__(self):
        return self.size


@dataclass
class GradedMatrix:
    source: ChainBasis
    target: ChainBasis
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.size, self.source.size)

    @property
    def ring(self) -> str:
        return self.source.ring

    def to_scipy(self):
        from scipy.sparse import coo_matrix

        m = coo_matrix((self.vals, (self.rows, self.cols)), shape=self.shape).tocsr()
        m.sum_duplicates()
        if self.ring == "Z2":
            m.data %= 2
        m.eliminate_zeros()
        return m

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    @property
    def nnz(self) -> int:
        return int(self.to_scipy().nnz)


@dataclass
class HomologyTable:
    ring: str
    groups: dict[tuple[int, int], tuple[int, list[int]]] = field(default_factory=dict)

    def rank(self, i: int, j: int) -> int:
        return self.groups.get((i, j), (0, []))[0]

    def torsion(self, i: int, j: int) -> list[int]:
        return list(self.groups.get((i, j), (0, []))[1])

    def nonzero(self) -> dict[tuple[int, int], tuple[int, list[int]]]:
        return {k: v for k, v in sorted(self.groups.items()) if v[0] or v[1]}

    def poincare(self) -> dict[tuple[int, int], int]:
        return {k: v[0] for k, v in self.nonzero().items() if v[0]}


def chain_basis(d: LinkDiagram, i: int, j: int, ring: str = "Z") -> ChainBasis:
    return ChainBasis(d, (i, j), normalize_ring(ring), cube(d).size(i, j))


def differential_matrix(d: LinkDiagram, i: int, j: int, ring: str = "Z") -> GradedMatrix:
    ring = normalize_ring(ring)
    cx = cube(d)
    rows, cols, vals, _ = cx.coo(i, j)
    if ring == "Z2":
        vals = vals % 2
    return GradedMatrix(chain_basis(d, i, j, ring), chain_basis(d, i + 1, j, ring), rows, cols, vals)


def check_d_squared(d: LinkDiagram, ring: str = "Z") -> int:
    """Assert d∘d = 0 on every slice; returns the number of slices checked."""
    ring = normalize_ring(ring)
    cx = cube(d)
    checked = 0
    for i, j in cx.gradings():
        if cx.size(i + 2, j) == 0:
            continue
        m1 = differential_matrix(d, i, j, ring).to_scipy()
        m2 = differential_matrix(d, i + 1, j, ring).to_scipy()
        prod = m2 @ m1
        if ring == "Z2":
            prod.data %= 2
        prod.eliminate_zeros()
        if prod.nnz:
            col = int(prod.tocoo().col[0])
            bad = list(cx.generators(i, j))[col]
            raise ConsistencyError(
                f"d∘d != 0 at (i,j)=({i},{j}) on generator mask={bad.mask:b} labels={bad.label_str()}"
            )
        checked += 1
    return checked


_SLICE_RANKS: dict = {}


def slice_rank(d: LinkDiagram, i: int, j: int, p: int) -> int:
    """Rank of ``d : C^{i,j} -> C^{i+1,j}`` mod p.

    Memoised on the crossings and loop count alone: base arcs and strand
    annotations do not enter the differential.
    """
    key = (d.crossings, d.n_circles, i, j, p)
    hit = _SLICE_RANKS.get(key)
    if hit is None:
        cx = cube(d)
        if cx.size(i, j) and cx.size(i + 1, j):
            rows, cols, vals, shape = cx.coo(i, j)
            hit = rank_mod_p(rows, cols, vals, shape, p)
        else:
            hit = 0
        _SLICE_RANKS[key] = hit
    return hit


def _ranks(d: LinkDiagram, ring: str, p: int | None = None) -> dict[tuple[int, int], int]:
    cx = cube(d)
    prime = p if p is not None else (2 if ring == "Z2" else LARGE_PRIME)
    return {(i, j): slice_rank(d, i, j, prime) for i, j in cx.gradings() if cx.size(i + 1, j)}


def homology(d: LinkDiagram, ring: str = "Z", torsion: bool = True, check: bool = True) -> HomologyTable:
    """Khovanov homology; over Z the torsion comes from Smith normal form."""
    ring = normalize_ring(ring)
    cx = cube(d)
    if check:
        check_d_squared(d, ring)
    sizes = cx.rank_table()
    factors: dict[tuple[int, int], list[int]] = {}
    if ring == "Z" and torsion:
        for i, j in cx.gradings():
            if cx.size(i + 1, j) == 0:
                continue
            rows, cols, vals, shape = cx.coo(i, j)
            factors[(i, j)] = smith_invariants(rows, cols, vals, shape)
        ranks = {k: len(v) for k, v in factors.items()}
    else:
        ranks = _ranks(d, ring)
    table = HomologyTable(ring)
    for (i, j), dim in sorted(sizes.items()):
        free = dim - ranks.get((i, j), 0) - ranks.get((i - 1, j), 0)
        tors = [f for f in factors.get((i - 1, j), []) if f > 1]
        table.groups[(i, j)] = (free, tors)
    return table


def euler_characteristic(d: LinkDiagram, level: str = "chain", ring: str = "Z") -> LaurentPoly:
    """``sum_j q^j sum_i (-1)^i rank``, from chain groups or from homology."""
    if level == "chain":
        ranks = cube(d).rank_table()
    elif level == "homology":
        ranks = homology(d, ring, torsion=False, check=False).poincare()
    else:
        raise ValueError("level must be 'chain' or 'homology'")
    acc: dict[int, int] = defaultdict(int)
    for (i, j), r in ranks.items():
        acc[j] += -r if i % 2 else r
    return LaurentPoly(dict(acc), "q")
