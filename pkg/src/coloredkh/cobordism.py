"""The chain map C(D^m) -> C(D^(m-2)) that contracts two neighbouring cable strands.

The two strands p, p+1 bound a thin band.  The map is the composite of

1. a saddle cutting the band at the base arc (Frobenius m or Δ, sign +1);
2. Reidemeister II retractions that slide the cut end of the band along the
   component, one bigon at a time, in traversal order from the base arc;
3. the counit on the small circle that remains (x -> 1, 1 -> 0).

Intermediate diagrams are never materialised: every state stays a state
of the big cable, with the already retracted crossings frozen at their
straight resolution.  Signs always use the full negative-marker word of the
big cable; the last step converts to the small cable's own word.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from ._kernels import colex_rank
from .cabling import ContractedStrands, _require_cable, contract_type1, event_groups, strand_count
from .diagram import DiagramError, LinkDiagram
from .khovanov import _labels_with, cube
from .poly import ConsistencyError
from .state import A_PAIRS, B_PAIRS, state_space

State = tuple[int, int]  # (marker mask, label mask)
Vector = dict  # State -> int

# what a pair of crossingless strands contributes: nothing, or merge-then-counit
DEGENERATE_MODES = ("zero", "cobordism")


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass
class Site:
    """One elimination step: a monogon (one crossing) or a bigon (two)."""

    bits: tuple[int, ...]
    keep: int  # markers over ``bits`` of the surviving resolution
    circle: int  # markers over ``bits`` of the resolution carrying the small circle
    small_node: int  # a node on that small circle

    @property
    def local(self) -> int:
        m = 0
        for k in self.bits:
            m |= 1 << k
        return m


class BandContraction:
    """Contraction of strands (p, p+1) of one component of a cable."""

    def __init__(
        self,
        dc: LinkDiagram,
        cs: ContractedStrands,
        small: LinkDiagram | None = None,
        degenerate_mode: str = "zero",
    ):
        if degenerate_mode not in DEGENERATE_MODES:
            raise ValueError(f"degenerate_mode must be one of {DEGENERATE_MODES}")
        self.degenerate_mode = degenerate_mode
        _require_cable(dc)
        self.dc = dc
        self.cs = cs
        sp = state_space(dc)
        self.sp = sp
        self.bits = {cid: k for k, cid in enumerate(sp.ids)}
        n_arcs = len(sp.arcs)
        strands = list(dc.strands)
        self.p_idx = strands.index((cs.component, cs.p))
        self.q_idx = strands.index((cs.component, cs.p + 1))
        P = dc.base_arcs[self.p_idx]
        Q = dc.base_arcs[self.q_idx]
        self.degenerate = P is None or Q is None
        if small is None:
            small, _ = contract_type1(dc, cs.component, (cs.p, cs.p + 1), cs.direction)
        self.small = small
        if self.degenerate:
            # a crossingless component: its strands are free circles
            self.slot_nodes = [[sp.arc_index[a] for a in x.arcs] for x in sp.crossings]
            self.contracted_bits = set()
            self.sites, self.phantoms, self.final_frozen = [], [], 0
            self._prepare_target()
            free_rank = {}
            for idx, b in enumerate(dc.base_arcs):
                if b is None:
                    free_rank[idx] = len(free_rank)
            self.band_free = (free_rank[self.p_idx], free_rank[self.q_idx])
            return
        # node numbering: arc indices, plus the forward halves of the two base arcs
        self.n_nodes = n_arcs + 2
        heads, tails = dc.head_tail()
        self.half = {}  # (arc, crossing id, slot) -> node
        back = {}
        for strand_idx, arc, fwd_node in ((self.p_idx, P, n_arcs), (self.q_idx, Q, n_arcs + 1)):
            flipped = dc.strand_flips[strand_idx]
            # the original direction runs tail -> head unless the copy is reversed
            back_end, fwd_end = (heads[arc], tails[arc]) if flipped else (tails[arc], heads[arc])
            self.half[(arc,) + back_end] = sp.arc_index[arc]
            self.half[(arc,) + fwd_end] = fwd_node
            back[strand_idx] = sp.arc_index[arc]
        self.P_back, self.Q_back = back[self.p_idx], back[self.q_idx]
        self.P_fwd, self.Q_fwd = n_arcs, n_arcs + 1
        # slot -> node per crossing bit
        self.slot_nodes = []
        for x in sp.crossings:
            row = []
            for s, a in enumerate(x.arcs):
                row.append(self.half.get((a, x.id, s), sp.arc_index[a]))
            self.slot_nodes.append(row)
        # every node has two ends; record where they attach
        self.ends: dict[int, list] = {u: [] for u in range(self.n_nodes)}
        for k, row in enumerate(self.slot_nodes):
            for s, u in enumerate(row):
                self.ends[u].append(("x", k))
        for u in (self.P_back, self.P_fwd, self.Q_back, self.Q_fwd):
            self.ends[u].append(("saddle",))
        self._cache: dict = {}
        self.contracted_bits = {
            self.bits[cid] for cids in event_groups(dc, cs).values() for cid in cids
        }
        self.sites = self._build_sites()
        self.final_frozen = 0
        for site in self.sites:
            self.final_frozen |= site.keep
        # monogons leave their small circle in place with a fixed label
        self.phantoms = [s for s in self.sites if len(s.bits) == 1]
        self._prepare_target()
        self._find_band()

    # ----------------------------------------------------------- geometry

    def _joins(self, k: int, neg: bool):
        row = self.slot_nodes[k]
        return [(row[i], row[j]) for i, j in (B_PAIRS if neg else A_PAIRS)]

    def _saddle_joins(self, turned: bool):
        if turned:
            return [(self.P_back, self.Q_back), (self.P_fwd, self.Q_fwd)]
        return [(self.P_back, self.P_fwd), (self.Q_back, self.Q_fwd)]

    def circles(self, mask: int, turned: bool) -> tuple[tuple[int, ...], int]:
        """Circle number per node (least node first) and the total circle count."""
        key = (mask, turned)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        parent = list(range(self.n_nodes))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        pairs = self._saddle_joins(turned)
        for k in range(self.sp.n):
            pairs = pairs + self._joins(k, bool(mask >> k & 1))
        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        number: dict[int, int] = {}
        owner = []
        for u in range(self.n_nodes):
            r = find(u)
            if r not in number:
                number[r] = len(number)
            owner.append(number[r])
        res = (tuple(owner), len(number) + self.sp.free_circles)
        if len(self._cache) < 1 << 16:
            self._cache[key] = res
        return res

    def _closed_loops(self, resolved_bits: dict[int, bool], closed_only: bool = True):
        """Components of the partially resolved diagram.

        A component is closed when every end of its nodes sits at a resolved
        crossing or at the saddle.  Returns the closed node sets, or with
        ``closed_only=False`` every (node set, closed) pair.
        """
        parent = list(range(self.n_nodes))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        pairs = self._saddle_joins(True)
        for k, neg in resolved_bits.items():
            pairs = pairs + self._joins(k, neg)
        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, set[int]] = {}
        for u in range(self.n_nodes):
            groups.setdefault(find(u), set()).add(u)
        out = []
        for g in groups.values():
            closed = all(e[0] == "saddle" or e[1] in resolved_bits for u in g for e in self.ends[u])
            if closed_only:
                if closed:
                    out.append(g)
            else:
                out.append((g, closed))
        return out

    def _components(self, resolved: dict[int, bool]):
        """Node components and their closed flags for a partial resolution."""
        comps = self._closed_loops(resolved, closed_only=False)
        where = {u: i for i, (g, _) in enumerate(comps) for u in g}
        return comps, where

    def _monogon(self, frozen: dict[int, bool], c: int) -> Site | None:
        for neg in (False, True):
            trial = dict(frozen)
            trial[c] = neg
            comps, where = self._components(trial)
            ends = [where[u] for u, _ in self._joins(c, neg)]
            if ends[0] == ends[1]:
                continue
            closed = [i for i in ends if comps[i][1]]
            if not closed:
                return None
            # with a choice, the circle holding the base keeps its identity
            pick = [i for i in closed if self.P_back not in comps[i][0]] or closed
            return Site((c,), int(neg) << c, int(neg) << c, min(comps[pick[0]][0]))
        return None

    def _bigon(self, frozen: dict[int, bool], a: int, b: int) -> Site | None:
        found = []
        sets = {}
        for na, nb in product((False, True), repeat=2):
            trial = dict(frozen)
            trial[a], trial[b] = na, nb
            comps, where = self._components(trial)
            sets[(na, nb)] = {frozenset(g) for g, closed in comps if closed}
            if na == nb:
                continue
            for g, closed in comps:
                if not closed:
                    continue
                hits = [k for k in (a, b) for u, v in self._joins(k, trial[k]) if u in g]
                if sorted(hits) == sorted((a, b)):
                    found.append(((na, nb), frozenset(g)))
        found = [
            (combo, g) for combo, g in found
            if not any(g in sets[c] for c in sets if c != combo)
        ]
        caps = {self.P_back, self.P_fwd, self.Q_back, self.Q_fwd}
        # a sliding cap always lies on the small circle of its bigon
        found = [f for f in found if f[1] & caps] or found
        if not found:
            return None
        # when everything nearby is closed both mixed resolutions qualify; take the tighter loop
        combo, g = min(found, key=lambda f: (len(f[1]), min(f[1])))
        circle = (int(combo[0]) << a) | (int(combo[1]) << b)
        keep = (int(not combo[0]) << a) | (int(not combo[1]) << b)
        return Site((a, b), keep, circle, min(g))

    def _build_sites(self) -> list[Site]:
        """Greedy order of eliminations, favouring the cap on the slide side."""
        ahead = {self.P_fwd, self.Q_fwd} if self.cs.direction > 0 else {self.P_back, self.Q_back}
        frozen: dict[int, bool] = {}
        left = sorted(self.contracted_bits)
        sites = []
        while left:
            cands = [((k,), 0) for k in left] + [(pr, 1) for pr in combinations(left, 2)]
            best = None
            for bits, kind in cands:
                site = self._monogon(frozen, bits[0]) if kind == 0 else self._bigon(frozen, *bits)
                if site is None:
                    continue
                on_cap = bool(self._loop_of(frozen, site) & ahead)
                rank = (not on_cap, kind, bits)
                if best is None or rank < best[0]:
                    best = (rank, site)
            if best is None:
                raise ConsistencyError(f"no removable monogon or bigon among crossings {left}")
            site = best[1]
            sites.append(site)
            for k in site.bits:
                frozen[k] = bool(site.keep >> k & 1)
                left.remove(k)
        return sites

    def _loop_of(self, frozen, site: Site) -> set[int]:
        trial = dict(frozen)
        trial.update({k: bool(site.circle >> k & 1) for k in site.bits})
        for g in self._closed_loops(trial):
            if site.small_node in g:
                return g
        return set()

    # ---------------------------------------------------------------- target

    def _prepare_target(self):
        dc, small = self.dc, self.small
        cs = self.cs
        ssp = state_space(small)
        self.ssp = ssp
        # crossing correspondence through the strand annotation
        def renum(strand):
            i, s = strand
            return (i, s - 2) if i == cs.component and s > cs.p + 1 else (i, s)

        small_by_key = {
            (o.crossing, o.under, o.over): cid for cid, o in small.origins.items()
        }
        self.kept = {}  # big bit -> small bit
        for cid, o in dc.origins.items():
            k = self.bits[cid]
            if k in self.contracted_bits:
                continue
            scid = small_by_key[(o.crossing, renum(o.under), renum(o.over))]
            self.kept[k] = ssp.index[scid]
        bigs = sorted(self.kept)
        if [self.kept[k] for k in bigs] != sorted(self.kept.values()):
            raise ConsistencyError("crossing correspondence is not order preserving")
        inv = {v: k for k, v in self.kept.items()}
        # a big node for every small arc
        self.small_arc_node = []
        s_slots = small.slots_of_arc()
        for a in ssp.arcs:
            scid, slot = s_slots[a][0]
            kbig = inv[ssp.index[scid]]
            self.small_arc_node.append(self.slot_nodes[kbig][slot])
        # free circles of the small cable, in component order
        self.small_free = []
        big_free_rank = {}
        for idx, b in enumerate(dc.base_arcs):
            if b is None:
                big_free_rank[idx] = len(big_free_rank)
        strands = list(dc.strands)
        for idx, b in enumerate(small.base_arcs):
            if b is not None:
                continue
            i, s = small.strands[idx]
            s_big = s + 2 if i == cs.component and s >= cs.p else s
            big_idx = strands.index((i, s_big))
            if dc.base_arcs[big_idx] is None:
                self.small_free.append(("free", big_free_rank[big_idx]))
            else:
                self.small_free.append(("node", self.sp.arc_index[dc.base_arcs[big_idx]]))

    def _find_band(self):
        """The one final circle that is neither a monogon leftover nor in the small cable."""
        mask = self.final_frozen
        own, _ = self.circles(mask, True)
        taken = {own[s.small_node] for s in self.phantoms}
        taken |= {own[u] for u in self.small_arc_node}
        taken |= {own[ref] for kind, ref in self.small_free if kind == "node"}
        rest = sorted({c for c in own} - taken)
        if len(rest) != 1:
            raise ConsistencyError(f"expected one band circle after contraction, found {len(rest)}")
        self.band_node = own.index(rest[0])

    # ----------------------------------------------------------------- maps

    def _sign(self, mask: int, k: int) -> int:
        return -1 if _popcount(mask >> (k + 1)) & 1 else 1

    def _relabel(self, old, new, labels: int, skip=()) -> int:
        """Carry labels of circles untouched by a local change to the new numbering."""
        (o_own, o_n), (n_own, n_n) = old, new
        n_arc_old = max(o_own) + 1 if o_own else 0
        out = 0
        for u, c in enumerate(o_own):
            if c in skip:
                continue
            if labels >> c & 1:
                out |= 1 << n_own[u]
        # free circles sit after the arc circles, in the same order
        n_arc_new = max(n_own) + 1 if n_own else 0
        for f in range(o_n - n_arc_old):
            if labels >> (n_arc_old + f) & 1:
                out |= 1 << (n_arc_new + f)
        return out

    def _frobenius(self, old, new, labels: int, site_nodes) -> list[int]:
        """Labels after a merge or split localised at ``site_nodes``."""
        (o_own, o_n), (n_own, n_n) = old, new
        olds = sorted({o_own[u] for u in site_nodes})
        news = sorted({n_own[u] for u in site_nodes})
        base = self._relabel(old, new, labels, skip=set(olds))
        if len(olds) == 2 and len(news) == 1:
            la, lb = (labels >> olds[0] & 1), (labels >> olds[1] & 1)
            if la and lb:
                return []
            return [base | ((la | lb) << news[0])]
        if len(olds) == 1 and len(news) == 2:
            if labels >> olds[0] & 1:
                return [base | (1 << news[0]) | (1 << news[1])]
            return [base | (1 << news[0]), base | (1 << news[1])]
        raise ConsistencyError("local change is neither a merge nor a split")

    def saddle(self, mask: int, labels: int) -> list[tuple[int, int]]:
        old = self.circles(mask, False)
        new = self.circles(mask, True)
        nodes = (self.P_back, self.P_fwd, self.Q_back, self.Q_fwd)
        return [(lab, 1) for lab in self._frobenius(old, new, labels, nodes)]

    def retract(self, site: Site, vec: Vector) -> Vector:
        """Gaussian elimination of the small circle at one site."""
        out: Vector = {}

        def add(key, c):
            out[key] = out.get(key, 0) + c

        for (mask, labels), coef in vec.items():
            local = mask & site.local
            if len(site.bits) == 2 and local == site.keep:
                add((mask, labels), coef)
                continue
            if local != site.circle:
                continue
            own = self.circles(mask, True)[0]
            small_c = own[site.small_node]
            small_x = bool(labels >> small_c & 1)
            if len(site.bits) == 1:
                (c,) = site.bits
                if not site.circle:
                    # small circle on the unmarked side: only its x part survives
                    if small_x:
                        add((mask, labels), coef)
                    continue
                if not small_x:
                    add((mask, labels), coef)
                    continue
                nb = next(own[u] for u in self.slot_nodes[c] if own[u] != small_c)
                if labels >> nb & 1:
                    continue
                add((mask, (labels & ~(1 << small_c)) | (1 << nb)), -coef)
                continue
            if not small_x:
                continue
            a, b = site.bits
            cb = a if site.circle >> a & 1 else b
            sb = b if cb == a else a
            u_mask = mask & ~(1 << cb)
            cur = self.circles(mask, True)
            u = self.circles(u_mask, True)
            # preimage under the split: the merged circle keeps the neighbour's label
            u_labels = 0
            for node, cc in enumerate(cur[0]):
                if cc != small_c and labels >> cc & 1:
                    u_labels |= 1 << u[0][node]
            n_arc_old = max(cur[0]) + 1
            n_arc_new = max(u[0]) + 1
            for f in range(cur[1] - n_arc_old):
                if labels >> (n_arc_old + f) & 1:
                    u_labels |= 1 << (n_arc_new + f)
            w_mask = u_mask | (1 << sb)
            w = self.circles(w_mask, True)
            sgn = -self._sign(u_mask, cb) * self._sign(u_mask, sb)
            for lab in self._frobenius(u, w, u_labels, self.slot_nodes[sb]):
                add((w_mask, lab), sgn * coef)
        return {k: v for k, v in out.items() if v}

    def to_small(self, mask: int, labels: int) -> tuple[int, int, int] | None:
        """Counit on the band circle, then rename into the small cable."""
        own, total = self.circles(mask, True)
        band = own[self.band_node]
        if not labels >> band & 1:
            return None
        small_mask = 0
        for k, ks in self.kept.items():
            if mask >> k & 1:
                small_mask |= 1 << ks
        s_owner, s_total = self.ssp.circles(small_mask)
        n_arc_small = max(s_owner) + 1 if s_owner else 0
        n_arc_big = max(own) + 1
        out = 0
        for a_idx, node in enumerate(self.small_arc_node):
            if labels >> own[node] & 1:
                out |= 1 << s_owner[a_idx]
        for f, (kind, ref) in enumerate(self.small_free):
            c = n_arc_big + ref if kind == "free" else own[ref]
            if labels >> c & 1:
                out |= 1 << (n_arc_small + f)
        if s_total != total - 1 - len(self.phantoms):
            raise ConsistencyError("circle count mismatch after removing the band")
        # move frozen negative markers out of the word
        sign = 1
        neg_frozen = mask & self.final_frozen
        free_part = mask & ~self._contracted_mask
        for k in range(self.sp.n):
            if neg_frozen >> k & 1 and _popcount(free_part & ((1 << k) - 1)) & 1:
                sign = -sign
        return small_mask, out, sign

    @property
    def _contracted_mask(self) -> int:
        m = 0
        for k in self.contracted_bits:
            m |= 1 << k
        return m

    def admissible(self, mask: int) -> bool:
        """Masks the composite can send to something nonzero."""
        for site in self.sites:
            local = mask & site.local
            if local != site.circle and (len(site.bits) == 1 or local != site.keep):
                return False
        return True

    def apply(self, mask: int, labels: int) -> Vector:
        """Image of one enhanced state of the big cable, as {(mask, labels): coef} of the small one."""
        if self.degenerate:
            return self._apply_free(mask, labels)
        if not self.admissible(mask):
            return {}
        vec: Vector = {}
        for lab, c in self.saddle(mask, labels):
            vec[(mask, lab)] = vec.get((mask, lab), 0) + c
        for site in self.sites:
            vec = self.retract(site, vec)
            if not vec:
                return {}
        out: Vector = {}
        for (m, lab), c in vec.items():
            res = self.to_small(m, lab)
            if res is None:
                continue
            sm, sl, sg = res
            out[(sm, sl)] = out.get((sm, sl), 0) + sg * c
        return {k: v for k, v in out.items() if v}

    def _apply_free(self, mask: int, labels: int) -> Vector:
        if self.degenerate_mode == "zero":
            return {}
        own, total = self.sp.circles(mask)
        n_arc = total - self.sp.free_circles
        fp, fq = (n_arc + r for r in self.band_free)
        # merge the two free circles, then take the counit
        if (labels >> fp & 1) + (labels >> fq & 1) != 1:
            return {}
        small_mask = 0
        for k, ks in self.kept.items():
            if mask >> k & 1:
                small_mask |= 1 << ks
        s_owner, s_total = self.ssp.circles(small_mask)
        n_arc_small = s_total - self.ssp.free_circles
        out = 0
        for a_idx, node in enumerate(self.small_arc_node):
            if labels >> own[node] & 1:
                out |= 1 << s_owner[a_idx]
        for f, (kind, ref) in enumerate(self.small_free):
            c = n_arc + ref if kind == "free" else own[ref]
            if labels >> c & 1:
                out |= 1 << (n_arc_small + f)
        return {(small_mask, out): 1}

    def coo(self, i: int, j: int):
        """Matrix of the map on the (i, j) slice, in the Khovanov bases of both cables."""
        src, tgt = cube(self.dc), cube(self.small)
        off, n_src, x = src.slice(i, j)
        t_off, n_tgt, _ = tgt.slice(i, j)
        rows, cols, vals = [], [], []
        if n_src and n_tgt:
            masks = np.nonzero(off >= 0)[0]
            for site in self.sites:
                local = masks & site.local
                ok = local == site.circle
                if len(site.bits) == 2:
                    ok |= local == site.keep
                masks = masks[ok]
            for mask in masks.tolist():
                base = int(off[mask])
                c = int(src.ncirc[mask])
                for idx, lab in enumerate(_labels_with(c, int(x[mask]))):
                    for (m2, l2), v in self.apply(mask, lab).items():
                        r0 = int(t_off[m2])
                        if r0 < 0:
                            raise ConsistencyError("contraction does not preserve the (i, j) grading")
                        rows.append(r0 + int(colex_rank(l2, tgt.binom)))
                        cols.append(base + idx)
                        vals.append(v)
        as_arr = lambda a: np.asarray(a, dtype=np.int64)
        return as_arr(rows), as_arr(cols), as_arr(vals), (n_tgt, n_src)
