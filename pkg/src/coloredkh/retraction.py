"""The Reidemeister II retraction ρ on a plain diagram, and Type 1_j classification.

At a bigon between crossings ``k1`` and ``k2`` the four local smoothings are
``++``, ``--``, a *straight* mixed smoothing and a *circle* mixed smoothing
that cuts off a small circle.  Gaussian elimination cancels ``++`` against
the circle smoothing with the small circle labelled x (a split), and the
circle smoothing with the small circle labelled 1 against ``--`` (a merge).
ρ = ι∘π is the idempotent chain map onto what survives:

* straight S:   S ↦ S − φ⁻¹ d_{--}(S), φ the merge from circle-with-1 to ``--``;
* circle S, small circle x:  S ↦ −ι d_{straight}(ψ⁻¹ S), ψ the split from ``++``;
* anything else ↦ 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .cabling import ContractedStrands, event_groups, type1_markers
from .diagram import DiagramError, LinkDiagram
from .khovanov import cube
from .state import EnhancedState, state_space


@dataclass(frozen=True)
class R2Site:
    k1: int          # crossing positions (bit indices), k1 < k2
    k2: int
    straight: tuple[int, int]
    circle: tuple[int, int]
    inner: tuple[int, int]   # arc indices of the bigon


def _combo(mask: int, site: R2Site) -> tuple[int, int]:
    return (mask >> site.k1 & 1, mask >> site.k2 & 1)


def find_r2_sites(d: LinkDiagram) -> list[R2Site]:
    """Crossing pairs bounding a bigon whose mixed smoothings are one straight, one circle."""
    sp = state_space(d)
    arcs_of = [{sp.arc_index[a] for a in x.arcs} for x in sp.crossings]
    out = []
    for k1 in range(sp.n):
        for k2 in range(k1 + 1, sp.n):
            shared = sorted(arcs_of[k1] & arcs_of[k2])
            # on the sphere both faces of a two-crossing diagram can be bigons
            for inner in combinations(shared, 2):
                site = _classify_pair(sp, k1, k2, inner)
                if site is not None:
                    out.append(site)
    return out


def _classify_pair(sp, k1, k2, inner) -> R2Site | None:
    base = 0
    kinds = {}
    counts = {}
    for combo in ((0, 0), (0, 1), (1, 0), (1, 1)):
        mask = base | (combo[0] << k1) | (combo[1] << k2)
        owner, n = sp.circles(mask)
        counts[combo] = n
        circ = {owner[a] for a in inner}
        closed = len(circ) == 1 and sum(1 for o in owner if o in circ) == 2
        kinds[combo] = closed
    mixed = [c for c in ((0, 1), (1, 0)) if kinds[c]]
    if len(mixed) != 1 or kinds[(0, 0)] or kinds[(1, 1)]:
        return None
    circle = mixed[0]
    straight = (1 - circle[0], 1 - circle[1])
    if counts[circle] != counts[(0, 0)] + 1 or counts[circle] != counts[(1, 1)] + 1:
        return None
    return R2Site(k1, k2, straight, circle, inner)


def require_site(d: LinkDiagram, k1: int, k2: int) -> R2Site:
    for s in find_r2_sites(d):
        if (s.k1, s.k2) == tuple(sorted((k1, k2))):
            return s
    raise DiagramError(f"crossings {k1}, {k2} do not bound a Reidemeister II bigon")


class _Local:
    """Column access to the Khovanov differential of one diagram."""

    def __init__(self, d: LinkDiagram):
        self.diagram = d
        self.cx = cube(d)
        self.sp = state_space(d)
        self._cols: dict = {}

    def grading(self, st: EnhancedState) -> tuple[int, int]:
        i = self.sp.i_grade(st.mask)
        return i, self.sp.j_grade(st.mask, st.labels, st.n_circles)

    def gens(self, i: int, j: int) -> list[EnhancedState]:
        key = ("g", i, j)
        if key not in self._cols:
            self._cols[key] = list(self.cx.generators(i, j))
        return self._cols[key]

    def d(self, st: EnhancedState) -> dict[EnhancedState, int]:
        i, j = self.grading(st)
        key = ("m", i, j)
        if key not in self._cols:
            from scipy.sparse import coo_matrix

            r, c, v, shape = self.cx.coo(i, j)
            self._cols[key] = coo_matrix((v, (r, c)), shape=shape).tocsc()
        m = self._cols[key]
        col = self.cx.index_of(st, i, j)
        tg = self.gens(i + 1, j)
        lo, hi = m.indptr[col], m.indptr[col + 1]
        out: dict[EnhancedState, int] = {}
        for r, v in zip(m.indices[lo:hi].tolist(), m.data[lo:hi].tolist()):
            if v:
                out[tg[r]] = out.get(tg[r], 0) + int(v)
        return {k: v for k, v in out.items() if v}

    def preimage(self, target: EnhancedState, flip: int, keep=lambda g: True) -> tuple[EnhancedState, int]:
        """The unique generator (among ``keep``) whose differential reaches ``target`` through ``flip``."""
        i, j = self.grading(target)
        src_mask = target.mask & ~(1 << flip)
        hits = []
        for g in self.gens(i - 1, j):
            if g.mask == src_mask and keep(g):
                c = self.d(g).get(target, 0)
                if c:
                    hits.append((g, c))
        if len(hits) != 1 or abs(hits[0][1]) != 1:
            raise DiagramError("local map at the bigon is not invertible")
        return hits[0]


@lru_cache(maxsize=32)
def _local(d: LinkDiagram) -> _Local:
    return _Local(d)


def _add(acc: dict, vec: dict, c: int = 1):
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + c * v
        if not acc[k]:
            del acc[k]


def _small_label(loc: _Local, site: R2Site, st: EnhancedState) -> int:
    owner, _ = loc.sp.circles(st.mask)
    return st.labels >> owner[site.inner[0]] & 1


def _iota(loc: _Local, site: R2Site, st: EnhancedState) -> dict[EnhancedState, int]:
    """Lift a straight-smoothing state to a cycle-compatible combination."""
    out = {st: 1}
    flip_st = site.k1 if site.straight[0] == 0 else site.k2
    flip_ci = site.k1 if site.circle[0] == 0 else site.k2
    for t, c in loc.d(st).items():
        if t.mask == st.mask | (1 << flip_st):
            g, e = loc.preimage(t, flip_ci, lambda u: _small_label(loc, site, u) == 0)
            _add(out, {g: -c * e})
    return out


def rho(d: LinkDiagram, site: R2Site, st: EnhancedState) -> dict[EnhancedState, int]:
    """ρ(S) as a formal sum of enhanced states with integer coefficients."""
    loc = _local(d)
    combo = _combo(st.mask, site)
    if combo == site.straight:
        return _iota(loc, site, st)
    if combo == site.circle and _small_label(loc, site, st) == 1:
        flip_ci = site.k1 if site.circle[0] == 1 else site.k2
        g, e = loc.preimage(st, flip_ci)
        out: dict[EnhancedState, int] = {}
        for t, c in loc.d(g).items():
            if _combo(t.mask, site) == site.straight:
                _add(out, _iota(loc, site, t), -e * c)
        return out
    return {}


def rho_matrix(d: LinkDiagram, site: R2Site, i: int, j: int) -> np.ndarray:
    """ρ on C^{i,j} as a dense integer matrix in the canonical basis."""
    loc = _local(d)
    gens = loc.gens(i, j)
    index = {g: k for k, g in enumerate(gens)}
    out = np.zeros((len(gens), len(gens)), dtype=np.int64)
    for col, g in enumerate(gens):
        for t, c in rho(d, site, g).items():
            out[index[t], col] += c
    return out


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class TypeClassification:
    verdict: str                      # "Type1j" or "Neither"
    panels: tuple[str | None, ...]    # per crossing group: "a" when it matches, else None
    sign: int

    @property
    def is_type1(self) -> bool:
        return self.verdict == "Type1j"


def classify_enhanced(dc: LinkDiagram, cs: ContractedStrands, st: EnhancedState) -> TypeClassification:
    """Does ``st`` carry the Type-1 markers of the pair, with j-preserving labels?

    Every crossing group of the pair must carry its Type-1 markers, and the
    circles cut off inside the pair (contracted circles) must be labelled
    with as many x's as 1's, which is what keeps j unchanged when they are
    deleted.  The sign is +1 for Type 1_j states.
    """
    sp = state_space(dc)
    markers = type1_markers(dc, cs)
    groups = event_groups(dc, cs)
    panels = []
    for key in sorted(groups, key=str):
        ok = all((st.mask >> sp.index[c] & 1) == (1 if markers[c] < 0 else 0) for c in groups[key])
        panels.append("a" if ok else None)
    if not all(panels):
        return TypeClassification("Neither", tuple(panels), 0)
    owner, _ = sp.circles(st.mask)
    touched = {sp.arc_index[a] for c in markers for a in dc.crossing(c).arcs}
    outside = {
        owner[sp.arc_index[a]] for x in sp.crossings if x.id not in markers for a in x.arcs
    }
    contracted = sorted({owner[a] for a in touched} - outside - _strand_circles(dc, sp, owner, cs))
    xs = sum(st.labels >> c & 1 for c in contracted)
    if 2 * xs != len(contracted):
        return TypeClassification("Neither", tuple(panels), 0)
    return TypeClassification("Type1j", tuple(panels), 1)


def _strand_circles(dc, sp, owner, cs) -> set[int]:
    """Circles through base arcs of strands that survive the contraction."""
    keep = set()
    for c, st in enumerate(dc.strands):
        b = dc.base_arcs[c]
        if b is None or (st[0] == cs.component and st[1] in (cs.p, cs.p + 1)):
            continue
        keep.add(owner[sp.arc_index[b]])
    return keep
