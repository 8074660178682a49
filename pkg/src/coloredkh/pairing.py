"""Pairings: nearest-neighbour edge sets on columns of dots, and their differentials.

Dots of each column are numbered 1..n bottom to top; columns are numbered
1..l left to right.  An edge ``(c, p)`` pairs dots ``p`` and ``p + 1`` of
column ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Pairing:
    shape: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # sorted (column, position), 1-based

    def __post_init__(self):
        used = set()
        for c, p in self.edges:
            if not 1 <= c <= len(self.shape) or not 1 <= p < self.shape[c - 1]:
                raise ValueError(f"edge {(c, p)} outside shape {self.shape}")
            if (c, p) in used or (c, p + 1) in used:
                raise ValueError("edges in a column must be disjoint")
            used.update({(c, p), (c, p + 1)})
        if tuple(sorted(self.edges)) != self.edges:
            object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @classmethod
    def of(cls, shape: Sequence[int], edges: Iterable[tuple[int, int]] = ()) -> "Pairing":
        return cls(tuple(shape), tuple(sorted(edges)))

    @property
    def k(self) -> int:
        return len(self.edges)

    def column_counts(self) -> tuple[int, ...]:
        counts = [0] * len(self.shape)
        for c, _ in self.edges:
            counts[c - 1] += 1
        return tuple(counts)

    def reduced_shape(self) -> tuple[int, ...]:
        """Strand counts of the smaller cable, ``n_i - 2 k_i``."""
        return tuple(n - 2 * k for n, k in zip(self.shape, self.column_counts()))

    def covered(self) -> set[tuple[int, int]]:
        return {(c, q) for c, p in self.edges for q in (p, p + 1)}

    def admissible(self) -> list[tuple[int, int]]:
        """Edges that can be added: both dots currently unpaired."""
        cov = self.covered()
        return [
            (c, p)
            for c, n in enumerate(self.shape, start=1)
            for p in range(1, n)
            if (c, p) not in cov and (c, p + 1) not in cov
        ]

    def add(self, edge: tuple[int, int]) -> "Pairing":
        return Pairing(self.shape, tuple(sorted(self.edges + (edge,))))

    def strand_of(self, edge: tuple[int, int]) -> tuple[int, int]:
        """(column, strand index p) of the lower strand an added edge contracts.

        Unpaired dots map order-preservingly onto the strands ``0..`` of the
        current reduced cable, so the edge picks strands ``p`` and ``p + 1``.
        """
        c, pos = edge
        cov = self.covered()
        below = sum(1 for q in range(1, pos) if (c, q) not in cov)
        return c, below

    def __str__(self):
        return f"{list(self.shape)}:{[list(e) for e in self.edges]}"


PairingSum = dict  # Pairing -> nonzero int


def _column_pairings(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Position sets of k disjoint nearest-neighbour edges among n dots."""
    for pos in combinations(range(1, n), k):
        if all(b - a >= 2 for a, b in zip(pos, pos[1:])):
            yield pos


def enumerate_pairings(shape: Sequence[int], k: int) -> list[Pairing]:
    """All pairings with k edges, in canonical (sorted edge list) order."""
    shape = tuple(shape)
    if k < 0:
        return []
    out = []
    for split in _splits(k, shape):
        cols = [list(_column_pairings(n, ki)) for n, ki in zip(shape, split)]
        for choice in product(*cols):
            edges = tuple((c + 1, p) for c, ps in enumerate(choice) for p in ps)
            out.append(Pairing(shape, tuple(sorted(edges))))
    out.sort()
    return out


def _splits(k: int, shape: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not shape:
        if k == 0:
            yield ()
        return
    for k0 in range(min(k, shape[0] // 2) + 1):
        for rest in _splits(k - k0, shape[1:]):
            yield (k0,) + rest


def pairing_count(shape: Sequence[int], k: int) -> int:
    """``sum over splits of prod binom(n_i - k_i, k_i)``."""
    return sum(
        _prod(comb(n - ki, ki) for n, ki in zip(shape, split)) for split in _splits(k, tuple(shape))
    )


def _prod(xs) -> int:
    r = 1
    for x in xs:
        r *= x
    return r


def edge_sign(t: Pairing, edge: tuple[int, int]) -> int:
    """(-1)^(edges of t above the new edge in its column + edges in columns to its right)."""
    c, p = edge
    later = sum(1 for c2, p2 in t.edges if (c2 == c and p2 > p) or c2 > c)
    return -1 if later % 2 else 1


def pairing_diff_mod2(s: Pairing) -> PairingSum:
    return {s.add(e): 1 for e in s.admissible()}


def pairing_diff(s: Pairing) -> PairingSum:
    out = {}
    for e in s.admissible():
        t = s.add(e)
        out[t] = edge_sign(t, e)
    return out


def apply_diff(vec: PairingSum, signed: bool = True) -> PairingSum:
    """Extend the differential linearly; coefficients mod 2 when unsigned."""
    acc: dict[Pairing, int] = {}
    for s, a in vec.items():
        for t, b in (pairing_diff(s) if signed else pairing_diff_mod2(s)).items():
            acc[t] = acc.get(t, 0) + a * b
    if signed:
        return {t: v for t, v in acc.items() if v}
    return {t: v % 2 for t, v in acc.items() if v % 2}


def shapes_up_to(total: int, max_columns: int = 3) -> Iterator[tuple[int, ...]]:
    """All shapes with 1..max_columns columns of positive size and sum <= total."""
    for l in range(1, max_columns + 1):
        for shape in product(range(1, total + 1), repeat=l):
            if sum(shape) <= total:
                yield shape
