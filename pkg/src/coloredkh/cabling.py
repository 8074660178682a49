"""Blackboard cables of link diagrams and the Type-1 contraction of two strands.

Copies of a strand are indexed ``1..m`` by their offset to the left of the
strand's direction.  Inside the grid that replaces an original crossing,
the under copies are vertical lines at ``x = -s`` and the over copies
horizontal lines at ``y = +t`` (positive crossing) or ``y = -t``
(negative crossing), in a frame where the original under-strand points north.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .diagram import (
    Crossing,
    CrossingOrigin,
    DiagramError,
    LinkDiagram,
    canonical_renumber,
    ensure_valid,
)
from .poly import ConsistencyError

ORIENTATIONS = ("parallel", "alternating")

# PD slot of each geometric direction, keyed by whether the under copy points north.
_GEO_SLOT = {
    True: {"S": 0, "E": 1, "N": 2, "W": 3},
    False: {"N": 0, "W": 1, "S": 2, "E": 3},
}
# A-smoothing joins S-E and N-W, B-smoothing joins S-W and N-E, in either frame.
SMOOTH_PAIRS = {1: (("S", "E"), ("N", "W")), -1: (("S", "W"), ("N", "E"))}


@dataclass(frozen=True)
class CableSpec:
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if any(m < 0 for m in self.multiplicities):
            raise ValueError("multiplicities must be nonnegative")


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, a):
        p = self.p
        p.setdefault(a, a)
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb, key=repr)] = min(ra, rb, key=repr)


def strand_flipped(s: int, orientation: str) -> bool:
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    return orientation == "alternating" and s % 2 == 0


def geo_slot(origin: CrossingOrigin, direction: str) -> int:
    return _GEO_SLOT[origin.under_up][direction]


def cable(d: LinkDiagram, spec: CableSpec | Sequence[int], orientation: str = "parallel") -> LinkDiagram:
    """The blackboard cable ``D^(m_1..m_l)``.

    ``orientation="parallel"`` orients every copy like its component;
    ``"alternating"`` reverses the even-indexed copies so that neighbouring
    strands are antiparallel.
    """
    mult = tuple(spec.multiplicities if isinstance(spec, CableSpec) else spec)
    if len(mult) != d.n_components:
        raise DiagramError(f"cable spec has {len(mult)} entries for {d.n_components} components")
    if d.strands is not None:
        raise DiagramError("cabling an already annotated cable is not supported; cable the base diagram")
    ensure_valid(d)
    arc_comp = d.arc_component()
    uf = _UF()
    raw = []  # (key, sign, geometric arcs S,E,N,W, origin)
    for x in d.crossings:
        a, b, c, e = x.arcs
        u, o = arc_comp[a], arc_comp[b]
        mu, mo = mult[u], mult[o]
        # order of over lines met by an under line going north, and of under lines
        # met by an over line going east
        t_order = list(range(1, mo + 1)) if x.sign > 0 else list(range(mo, 0, -1))
        s_order = list(range(mu, 0, -1))

        def upiece(s, k):
            if k == 0:
                return ("A", a, s)
            if k == mo:
                return ("A", c, s)
            return ("U", x.id, s, k)

        def opiece(t, k):
            if k == 0:
                return ("A", e, t)
            if k == mu:
                return ("A", b, t)
            return ("O", x.id, t, k)

        if mo == 0:
            for s in range(1, mu + 1):
                uf.union(("A", a, s), ("A", c, s))
        if mu == 0:
            for t in range(1, mo + 1):
                uf.union(("A", e, t), ("A", b, t))
        for ku, t in enumerate(t_order, start=1):
            for ko, s in enumerate(s_order, start=1):
                geo = {"S": upiece(s, ku - 1), "N": upiece(s, ku), "W": opiece(t, ko - 1), "E": opiece(t, ko)}
                up = not strand_flipped(s, orientation)
                h = (1 if x.sign > 0 else -1) * (-1 if strand_flipped(t, orientation) else 1)
                v = 1 if up else -1
                order = ("S", "E", "N", "W") if up else ("N", "W", "S", "E")
                origin = CrossingOrigin(x.id, (u, s), (o, t), up)
                raw.append(((x.id, s, t), h * v, tuple(geo[g] for g in order), origin))
    # every piece key seen in crossings or as a copy of an original arc
    pieces = {p for r in raw for p in r[2]}
    raw.sort(key=lambda r: ([y.id for y in d.crossings].index(r[0][0]), r[0][1], r[0][2]))
    ids: dict = {}
    for p in sorted(pieces, key=repr):
        ids.setdefault(uf.find(p), len(ids) + 1)
    crossings, origins = [], {}
    for n, (_, sign, arcs, origin) in enumerate(raw, start=1):
        crossings.append(Crossing(n, sign, tuple(ids[uf.find(p)] for p in arcs)))
        origins[n] = origin
    used = {u for x in crossings for u in x.arcs}
    bases, strands, flips = [], [], []
    for i in range(d.n_components):
        for s in range(1, mult[i] + 1):
            strands.append((i, s))
            flips.append(strand_flipped(s, orientation))
            base = d.base_arcs[i]
            if base is None:
                bases.append(None)
                continue
            key = uf.find(("A", base, s))
            bases.append(ids[key] if key in ids and ids[key] in used else None)
    out = LinkDiagram(tuple(crossings), tuple(bases), tuple(strands), tuple(flips), origins)
    return canonical_renumber(out)


def cable_crossing_count(d: LinkDiagram, mult: Sequence[int]) -> int:
    ac = d.arc_component()
    return sum(mult[ac[x.arcs[0]]] * mult[ac[x.arcs[1]]] for x in d.crossings)


# ---------------------------------------------------------------- contraction


@dataclass(frozen=True)
class ContractedStrands:
    component: int  # original component index
    p: int  # lower strand index; the pair is (p, p+1)
    direction: int = 1  # +1 along the original orientation, -1 against it


def _require_cable(dc: LinkDiagram):
    if dc.strands is None or dc.origins is None:
        raise DiagramError("diagram carries no strand annotation (not a cable)")


def strand_count(dc: LinkDiagram, component: int) -> int:
    _require_cable(dc)
    return sum(1 for i, _ in dc.strands if i == component)


def event_groups(dc: LinkDiagram, cs: ContractedStrands) -> dict[tuple, list[int]]:
    """Group the crossings of the contracted pair into meetings.

    Keys are ``("a", x)`` for the four crossings where the pair meets itself
    at original crossing ``x`` and ``("b", x, role, line)`` for the two
    crossings where it meets the non-contracted copy ``line`` (which is the
    ``role`` strand of the crossing).
    """
    _require_cable(dc)
    pair = (cs.p, cs.p + 1)
    m = strand_count(dc, cs.component)
    if cs.p < 1 or cs.p + 1 > m:
        raise DiagramError(f"strands {pair} are not adjacent strands of component {cs.component}")
    groups: dict[tuple, list[int]] = {}
    for cid, org in sorted(dc.origins.items()):
        uin = org.under[0] == cs.component and org.under[1] in pair
        oin = org.over[0] == cs.component and org.over[1] in pair
        if uin and oin:
            key = ("a", org.crossing)
        elif uin:
            key = ("b", org.crossing, "over", org.over)
        elif oin:
            key = ("b", org.crossing, "under", org.under)
        else:
            continue
        groups.setdefault(key, []).append(cid)
    for key, cids in groups.items():
        if len(cids) != (4 if key[0] == "a" else 2):
            raise DiagramError(f"malformed crossing group {key}")
    return groups


def _line_ends(dc, cid, which):
    """Geometric (back, forward) directions of the under or over line, original orientation."""
    org = dc.origins[cid]
    if which == "under":
        return ("S", "N")
    sign_orig = _orig_sign(dc, cid)
    return ("W", "E") if sign_orig > 0 else ("E", "W")


def _orig_sign(dc, cid) -> int:
    org = dc.origins[cid]
    x = dc.crossing(cid)
    flip_u = not org.under_up
    flip_o = _flip_of(dc, org.over)
    # sign = h*v with h = orig_sign * (-1)^flip_o and v = (-1)^flip_u
    return x.sign * (-1 if flip_u else 1) * (-1 if flip_o else 1)


def _flip_of(dc, strand):
    return dc.strand_flips[dc.strands.index(strand)]


def _internal_pairs(dc, cids, key):
    """Geometric slot pairs joined by grid pieces interior to a group."""
    out = []
    orgs = {c: dc.origins[c] for c in cids}
    osign = _orig_sign(dc, cids[0])
    by_under: dict = {}
    by_over: dict = {}
    for c, o in orgs.items():
        by_under.setdefault(o.under, []).append(c)
        by_over.setdefault(o.over, []).append(c)
    for line, cs_ in by_under.items():
        if len(cs_) == 2:
            # southern crossing has the smaller y: y = t (positive) or -t
            ys = {c: (orgs[c].over[1] if osign > 0 else -orgs[c].over[1]) for c in cs_}
            south, north = sorted(cs_, key=ys.get)
            out.append(((south, "N"), (north, "S")))
    for line, cs_ in by_over.items():
        if len(cs_) == 2:
            west, east = sorted(cs_, key=lambda c: -orgs[c].under[1])
            out.append(((west, "E"), (east, "W")))
    return out


def _solve_group(dc, cs: ContractedStrands, key, cids):
    """Markers on one group realising the Type-1 rule; must be unique."""
    internal = _internal_pairs(dc, cids, key)
    inner = {n for pr in internal for n in pr}
    ends = [(c, g) for c in cids for g in "SENW" if (c, g) not in inner]
    pair = (cs.p, cs.p + 1)
    role = {}  # end -> (kind, strand, back/fwd)
    for c, g in ends:
        org = dc.origins[c]
        if g in "SN":
            line, which = org.under, "under"
        else:
            line, which = org.over, "over"
        back, fwd = _line_ends(dc, c, which)
        if cs.direction < 0:
            back, fwd = fwd, back
        contracted = line[0] == cs.component and line[1] in pair
        role[(c, g)] = ("c" if contracted else "r", which, line, "back" if g == back else "fwd")
    solutions = []
    for markers in itertools.product((1, -1), repeat=len(cids)):
        adj: dict = {}

        def link(u, v):
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)

        for a, b in internal:
            link(a, b)
        for c, mk in zip(cids, markers):
            for g1, g2 in SMOOTH_PAIRS[mk]:
                link((c, g1), (c, g2))
        # follow paths from each end
        partner = {}
        visited = set()
        for e0 in ends:
            if e0 in partner:
                continue
            prev, cur = None, e0
            path = [e0]
            while True:
                nxt = [n for n in adj[cur] if n != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                path.append(cur)
                if cur in role and cur != e0:
                    break
            visited.update(path)
            partner[e0], partner[cur] = cur, e0
        if len(visited) != 4 * len(cids):
            continue  # a closed loop inside the group
        if _type1_ok(key, role, partner):
            solutions.append(dict(zip(cids, markers)))
    if len(solutions) != 1:
        raise DiagramError(f"group {key}: {len(solutions)} Type-1 smoothings")
    return solutions[0]


def _type1_ok(key, role, partner) -> bool:
    for e, f in partner.items():
        re_, rf = role[e], role[f]
        if key[0] == "a":
            # every end is capped with the same-position end of its neighbour
            if re_[1] != rf[1] or re_[3] != rf[3] or re_[2] == rf[2]:
                return False
        else:
            kinds = {re_[0], rf[0]}
            if re_[0] == "c" and rf[0] == "c":
                if not (re_[3] == rf[3] == "back"):
                    return False
            elif kinds == {"c", "r"}:
                cend = re_ if re_[0] == "c" else rf
                if cend[3] != "fwd":
                    return False
            else:
                return False
    return True


def type1_markers(dc: LinkDiagram, cs: ContractedStrands) -> dict[int, int]:
    """Markers of the Type-1 smoothing of the contracted pair, per crossing id."""
    out = {}
    for key, cids in event_groups(dc, cs).items():
        out.update(_solve_group(dc, cs, key, cids))
    return out


def contract_type1(
    dc: LinkDiagram, component: int, strand_pair: tuple[int, int], direction: int = 1
) -> tuple[LinkDiagram, int]:
    """Smooth the crossings of two neighbouring strands by the Type-1 rule.

    Returns the smaller cable (strands above the pair renumbered down by two)
    and the number of contracted circles.
    """
    _require_cable(dc)
    p, q = strand_pair
    if q != p + 1:
        raise DiagramError(f"strands {strand_pair} are not adjacent")
    cs = ContractedStrands(component, p, direction)
    markers = type1_markers(dc, cs)
    uf = _UF()
    for cid, mk in markers.items():
        x = dc.crossing(cid)
        org = dc.origins[cid]
        for g1, g2 in SMOOTH_PAIRS[mk]:
            uf.union(x.arcs[geo_slot(org, g1)], x.arcs[geo_slot(org, g2)])
    kept = [x for x in dc.crossings if x.id not in markers]
    pair = (p, p + 1)
    in_kept = {uf.find(a) for x in kept for a in x.arcs}
    loops = {uf.find(a) for a in dc.arcs()} - in_kept
    kept_strands = set()
    for x in kept:
        o = dc.origins[x.id]
        kept_strands.update((o.under, o.over))
    idle = sum(
        1
        for c, st in enumerate(dc.strands)
        if dc.base_arcs[c] is not None and st not in kept_strands and not (st[0] == component and st[1] in pair)
    )
    contracted_circles = len(loops) - idle
    if contracted_circles % 2:
        raise ConsistencyError(f"odd number of contracted circles ({contracted_circles})")

    def renum(strand):
        i, s = strand
        return (i, s - 2) if i == component and s > p + 1 else (i, s)

    new_x, new_org = [], {}
    for x in kept:
        o = dc.origins[x.id]
        new_x.append(Crossing(x.id, x.sign, tuple(uf.find(a) for a in x.arcs)))
        new_org[x.id] = CrossingOrigin(o.crossing, renum(o.under), renum(o.over), o.under_up)
    # crossing ids follow the canonical cable order
    order = sorted(new_x, key=lambda y: (new_org[y.id].crossing, new_org[y.id].under[1], new_org[y.id].over[1]))
    orig_order = _orig_crossing_order(dc)
    order.sort(key=lambda y: (orig_order[new_org[y.id].crossing], new_org[y.id].under[1], new_org[y.id].over[1]))
    relabel = {y.id: n for n, y in enumerate(order, start=1)}
    xs = tuple(Crossing(relabel[y.id], y.sign, y.arcs) for y in order)
    origins = {relabel[k]: v for k, v in new_org.items()}
    bases, strands, flips = [], [], []
    used = {a for y in xs for a in y.arcs}
    for c, (i, s) in enumerate(dc.strands):
        if i == component and s in pair:
            continue
        strands.append(renum((i, s)))
        flips.append(dc.strand_flips[c])
        b = dc.base_arcs[c]
        bases.append(None if b is None or uf.find(b) not in used else uf.find(b))
    out = LinkDiagram(xs, tuple(bases), tuple(strands), tuple(flips), origins)
    return canonical_renumber(ensure_valid(out)), contracted_circles


def _orig_crossing_order(dc) -> dict[int, int]:
    seen = sorted({o.crossing for o in dc.origins.values()})
    # cable crossing ids increase with the original crossing's position
    first = {}
    for cid in sorted(dc.origins):
        first.setdefault(dc.origins[cid].crossing, cid)
    return {x: first[x] for x in seen}
