"""Kauffman states, enhanced states, gradings and state sums.

Markers are encoded as bit masks over the crossings in increasing id order:
bit ``k`` set means the ``k``-th crossing carries a negative marker
(the B-smoothing joining slots ``(a, d)`` and ``(b, c)``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .diagram import LinkDiagram, negative_count, writhe
from .poly import LaurentPoly, binomial_poly

# slot pairs joined by a positive / negative marker
A_PAIRS = ((0, 1), (2, 3))
B_PAIRS = ((0, 3), (1, 2))


@dataclass(frozen=True)
class KauffmanState:
    markers: Mapping[int, int]

    @property
    def sigma(self) -> int:
        return sum(self.markers.values())


@dataclass(frozen=True)
class EnhancedState:
    """Markers as a negative-marker bit mask plus one label bit per circle (set = x)."""

    mask: int
    labels: int
    n_circles: int

    @property
    def tau(self) -> int:
        return self.n_circles - 2 * bin(self.labels).count("1")

    def label_str(self) -> str:
        return "⊗".join("x" if self.labels >> k & 1 else "1" for k in range(self.n_circles))


class StateSpace:
    """Circle tracing for one diagram, with per-mask caching."""

    def __init__(self, d: LinkDiagram):
        self.diagram = d
        self.crossings = sorted(d.crossings, key=lambda x: x.id)
        self.ids = [x.id for x in self.crossings]
        self.index = {cid: k for k, cid in enumerate(self.ids)}
        self.arcs = d.arcs()
        self.arc_index = {a: k for k, a in enumerate(self.arcs)}
        self.n = len(self.crossings)
        self.free_circles = d.n_circles
        self.w = writhe(d)
        self.n_neg = negative_count(d)
        ai = self.arc_index
        self._joins = [
            (
                tuple((ai[x.arcs[i]], ai[x.arcs[j]]) for i, j in A_PAIRS),
                tuple((ai[x.arcs[i]], ai[x.arcs[j]]) for i, j in B_PAIRS),
            )
            for x in self.crossings
        ]
        self._cache: dict[int, tuple[tuple[int, ...], int]] = {}

    def circles(self, mask: int) -> tuple[tuple[int, ...], int]:
        """Per arc index the circle number, and the total circle count.

        Circles are numbered by their least arc; crossingless components
        come last.
        """
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        parent = list(range(len(self.arcs)))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for k, (ap, bp) in enumerate(self._joins):
            for u, v in bp if mask >> k & 1 else ap:
                ru, rv = find(u), find(v)
                if ru != rv:
                    if ru < rv:
                        parent[rv] = ru
                    else:
                        parent[ru] = rv
        number: dict[int, int] = {}
        owner = []
        for u in range(len(self.arcs)):
            r = find(u)
            if r not in number:
                number[r] = len(number)
            owner.append(number[r])
        res = (tuple(owner), len(number) + self.free_circles)
        if len(self._cache) < 1 << 18:
            self._cache[mask] = res
        return res

    def n_circles(self, mask: int) -> int:
        return self.circles(mask)[1]

    def i_grade(self, mask: int) -> int:
        return bin(mask).count("1") - self.n_neg

    def j_grade(self, mask: int, labels: int, n_circles: int) -> int:
        tau = n_circles - 2 * bin(labels).count("1")
        return self.w + self.i_grade(mask) + tau

    def masks(self) -> range:
        return range(1 << self.n)


@lru_cache(maxsize=64)
def state_space(d: LinkDiagram) -> StateSpace:
    return StateSpace(d)


def smooth(d: LinkDiagram, s: KauffmanState | Mapping[int, int]) -> list[frozenset[int]]:
    """Circles of the smoothing, as arc sets; crossingless circles are empty sets."""
    markers = s.markers if isinstance(s, KauffmanState) else s
    sp = state_space(d)
    if set(markers) != set(sp.ids):
        raise ValueError("state must assign a marker to every crossing")
    mask = sum(1 << sp.index[c] for c, m in markers.items() if m < 0)
    owner, total = sp.circles(mask)
    groups: dict[int, set[int]] = {}
    for k, c in enumerate(owner):
        groups.setdefault(c, set()).add(sp.arcs[k])
    out = [frozenset(groups[c]) for c in sorted(groups)]
    out.extend(frozenset() for _ in range(sp.free_circles))
    return out


def circle_count_distribution(d: LinkDiagram) -> Counter:
    """Counter over (number of negative markers, circle count)."""
    sp = state_space(d)
    dist: Counter = Counter()
    for mask in sp.masks():
        dist[(bin(mask).count("1"), sp.n_circles(mask))] += 1
    return dist


def kauffman_bracket(d: LinkDiagram) -> LaurentPoly:
    delta = binomial_poly("A")
    n = len(d.crossings)
    total = LaurentPoly.zero("A")
    powers: dict[int, LaurentPoly] = {}
    for (neg, c), mult in circle_count_distribution(d).items():
        if c not in powers:
            powers[c] = delta**c
        total = total + powers[c].shift(n - 2 * neg) * mult
    return total


def enhanced_states(d: LinkDiagram) -> Iterator[tuple[EnhancedState, int, int]]:
    """All enhanced states with their (i, j), in marker order then label order."""
    sp = state_space(d)
    for mask in sp.masks():
        c = sp.n_circles(mask)
        i = sp.i_grade(mask)
        for labels in range(1 << c):
            st = EnhancedState(mask, labels, c)
            yield st, i, sp.w + i + st.tau


def state_sum_jones(d: LinkDiagram) -> LaurentPoly:
    """``sum (-1)^i q^j`` over enhanced states, summing labels in closed form."""
    sp = state_space(d)
    loop = binomial_poly("q")
    total = LaurentPoly.zero("q")
    powers: dict[int, LaurentPoly] = {}
    for (neg, c), mult in circle_count_distribution(d).items():
        i = neg - sp.n_neg
        if c not in powers:
            powers[c] = loop**c
        total = total + powers[c].shift(sp.w + i) * ((-1) ** (i % 2) * mult)
    return total


def enhanced_state_sum_jones(d: LinkDiagram) -> LaurentPoly:
    """Literal enumeration of every enhanced state; for small diagrams only."""
    acc: Counter = Counter()
    for _, i, j in enhanced_states(d):
        acc[j] += -1 if i % 2 else 1
    return LaurentPoly(dict(acc), "q")
