"""Oriented link diagrams as planar-diagram codes.

A crossing is ``(id, sign, (a, b, c, d))``.  Slot ``a`` is the incoming
under-strand and the slots run counterclockwise, so ``c`` is the outgoing
under-strand and the over-strand joins ``b`` and ``d``.  For a positive
crossing the over-strand runs ``d -> b``; for a negative one ``b -> d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

# Geometric directions of the four slots when the under-strand points north.
UNDER_IN, UNDER_OUT = 0, 2


class DiagramError(ValueError):
    """Raised for malformed diagram input."""


@dataclass(frozen=True)
class Crossing:
    id: int
    sign: int
    arcs: tuple[int, int, int, int]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DiagramError(f"crossing {self.id}: sign must be +1 or -1")
        if len(self.arcs) != 4:
            raise DiagramError(f"crossing {self.id}: needs four arcs")

    @property
    def over_in(self) -> int:
        return 3 if self.sign > 0 else 1

    @property
    def over_out(self) -> int:
        return 1 if self.sign > 0 else 3

    def is_incoming(self, slot: int) -> bool:
        return slot == UNDER_IN or slot == self.over_in

    def partner(self, slot: int) -> int:
        """The slot on the same strand across the crossing."""
        return (slot + 2) % 4


@dataclass(frozen=True)
class CrossingOrigin:
    """Where a cable crossing came from: original crossing and the two strand copies."""

    crossing: int
    under: tuple[int, int]  # (original component, strand index)
    over: tuple[int, int]
    under_up: bool  # under copy runs in the original under direction


@dataclass(frozen=True)
class LinkDiagram:
    """Immutable planar-diagram code.

    ``base_arcs[c]`` is the distinguished arc of component ``c``, or
    ``None`` for a crossingless circle component.  Cables additionally
    carry per-component strand data and per-crossing origins.
    """

    crossings: tuple[Crossing, ...]
    base_arcs: tuple[int | None, ...]
    strands: tuple[tuple[int, int], ...] | None = None
    strand_flips: tuple[bool, ...] | None = None
    origins: Mapping[int, CrossingOrigin] | None = field(default=None, compare=False)

    @property
    def n_components(self) -> int:
        return len(self.base_arcs)

    @property
    def circles(self) -> tuple[int, ...]:
        return tuple(1 if b is None else 0 for b in self.base_arcs)

    @property
    def n_circles(self) -> int:
        return sum(self.circles)

    def crossing(self, cid: int) -> Crossing:
        return self._index()[cid]

    def _index(self) -> dict[int, Crossing]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {x.id: x for x in self.crossings}
            object.__setattr__(self, "_idx", idx)
        return idx

    def arcs(self) -> list[int]:
        return sorted({a for x in self.crossings for a in x.arcs})

    def slots_of_arc(self) -> dict[int, list[tuple[int, int]]]:
        occ: dict[int, list[tuple[int, int]]] = {}
        for x in self.crossings:
            for s, a in enumerate(x.arcs):
                occ.setdefault(a, []).append((x.id, s))
        return occ

    def head_tail(self) -> tuple[dict[int, tuple[int, int]], dict[int, tuple[int, int]]]:
        """Per arc: the slot where it ends (head) and where it starts (tail)."""
        heads, tails = {}, {}
        for x in self.crossings:
            for s, a in enumerate(x.arcs):
                (heads if x.is_incoming(s) else tails)[a] = (x.id, s)
        return heads, tails

    def next_arc(self, arc: int) -> int:
        heads, _ = self._head_tail_cached()
        cid, slot = heads[arc]
        return self.crossing(cid).arcs[(slot + 2) % 4]

    def prev_arc(self, arc: int) -> int:
        _, tails = self._head_tail_cached()
        cid, slot = tails[arc]
        return self.crossing(cid).arcs[(slot + 2) % 4]

    def _head_tail_cached(self):
        ht = self.__dict__.get("_ht")
        if ht is None:
            ht = self.head_tail()
            object.__setattr__(self, "_ht", ht)
        return ht

    def component_arcs(self, comp: int) -> list[int]:
        """Arcs of a component in orientation order starting at the base arc."""
        base = self.base_arcs[comp]
        if base is None:
            return []
        out = [base]
        a = self.next_arc(base)
        while a != base:
            out.append(a)
            a = self.next_arc(a)
        return out

    def arc_component(self) -> dict[int, int]:
        comp = {}
        for c in range(self.n_components):
            for a in self.component_arcs(c):
                comp[a] = c
        return comp

    def crossing_components(self, cid: int) -> tuple[int, int]:
        """(under component, over component)."""
        x = self.crossing(cid)
        ac = self.arc_component()
        return ac[x.arcs[0]], ac[x.arcs[1]]


def writhe(d: LinkDiagram) -> int:
    return sum(x.sign for x in d.crossings)


def negative_count(d: LinkDiagram) -> int:
    return sum(1 for x in d.crossings if x.sign < 0)


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, code: str, msg: str):
        self.errors.append((code, msg))

    def codes(self) -> list[str]:
        return [c for c, _ in self.errors]


def validate_diagram(d: LinkDiagram) -> ValidationReport:
    rep = ValidationReport()
    ids = [x.id for x in d.crossings]
    if len(set(ids)) != len(ids):
        rep.add("duplicate-crossing", "crossing ids repeat")
    occ = d.slots_of_arc()
    for a, slots in sorted(occ.items()):
        if len(slots) != 2:
            rep.add("dangling-arc", f"arc {a} occurs {len(slots)} times")
    if not rep.ok:
        return rep
    heads: dict[int, int] = {}
    tails: dict[int, int] = {}
    for x in d.crossings:
        for s, a in enumerate(x.arcs):
            bucket = heads if x.is_incoming(s) else tails
            bucket[a] = bucket.get(a, 0) + 1
    for a in occ:
        if heads.get(a, 0) != 1 or tails.get(a, 0) != 1:
            rep.add("orientation-conflict", f"arc {a} has {heads.get(a, 0)} heads")
    if not rep.ok:
        return rep
    seen: dict[int, int] = {}
    for c, base in enumerate(d.base_arcs):
        if base is None:
            continue
        if base not in occ:
            rep.add("bad-component", f"base arc {base} of component {c} is not an arc")
            continue
        for a in d.component_arcs(c):
            if a in seen:
                rep.add("bad-component", f"components {seen[a]} and {c} share arc {a}")
                break
            seen[a] = c
    missing = set(occ) - set(seen)
    if missing and rep.ok:
        rep.add("bad-component", f"arcs {sorted(missing)[:5]} belong to no component")
    if d.strands is not None and len(d.strands) != d.n_components:
        rep.add("bad-annotation", "strand annotation length differs from component count")
    return rep


def ensure_valid(d: LinkDiagram) -> LinkDiagram:
    rep = validate_diagram(d)
    if not rep.ok:
        raise DiagramError("; ".join(f"{c}: {m}" for c, m in rep.errors))
    return d


# ---------------------------------------------------------------- construction


def make_diagram(
    crossings: Iterable[tuple[int, int, Sequence[int]]],
    base_arcs: Sequence[int | None],
) -> LinkDiagram:
    xs = tuple(Crossing(int(i), int(s), tuple(int(a) for a in arcs)) for i, s, arcs in crossings)
    return LinkDiagram(xs, tuple(base_arcs))


def from_pd(pd: Sequence[Sequence[int]], signs: Sequence[int], base_arcs=None) -> LinkDiagram:
    """Build from a bare PD list; components are discovered from the arcs."""
    xs = tuple(Crossing(i + 1, s, tuple(a)) for i, (a, s) in enumerate(zip(pd, signs)))
    if base_arcs is None:
        tmp = LinkDiagram(xs, ())
        left = set(tmp.arcs())
        base_arcs = []
        while left:
            b = min(left)
            base_arcs.append(b)
            a = b
            while True:
                left.discard(a)
                a = tmp.next_arc(a)
                if a == b:
                    break
    return LinkDiagram(xs, tuple(base_arcs))


def canonical_renumber(d: LinkDiagram) -> LinkDiagram:
    """Renumber arcs 1, 2, ... in traversal order from each base arc."""
    mapping: dict[int, int] = {}
    for c in range(d.n_components):
        for a in d.component_arcs(c):
            mapping[a] = len(mapping) + 1
    xs = tuple(Crossing(x.id, x.sign, tuple(mapping[a] for a in x.arcs)) for x in d.crossings)
    bases = tuple(None if b is None else mapping[b] for b in d.base_arcs)
    return replace(d, crossings=xs, base_arcs=bases)


def with_base_arcs(d: LinkDiagram, base_arcs: Sequence[int | None]) -> LinkDiagram:
    """Same diagram with different base arcs; components are re-derived."""
    return replace(d, base_arcs=tuple(base_arcs))


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing (over becomes under)."""
    xs = []
    for x in d.crossings:
        a, b, c, e = x.arcs
        # new under strand is the old over strand; keep counterclockwise order
        if x.sign > 0:
            xs.append(Crossing(x.id, -1, (e, a, b, c)))
        else:
            xs.append(Crossing(x.id, 1, (b, c, e, a)))
    return replace(d, crossings=tuple(xs))


def switch_crossing(d: LinkDiagram, cid: int) -> LinkDiagram:
    xs = []
    for x in d.crossings:
        if x.id != cid:
            xs.append(x)
            continue
        a, b, c, e = x.arcs
        xs.append(Crossing(x.id, -1, (e, a, b, c)) if x.sign > 0 else Crossing(x.id, 1, (b, c, e, a)))
    return replace(d, crossings=tuple(xs), origins=None)


# ---------------------------------------------------------------- serialization


def to_json(d: LinkDiagram) -> str:
    doc = {
        "components": d.n_components,
        "crossings": [
            {"id": x.id, "sign": "+" if x.sign > 0 else "-", "arcs": list(x.arcs)}
            for x in d.crossings
        ],
        "circles": list(d.circles),
        "base_arcs": list(d.base_arcs),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def from_json(text: str) -> LinkDiagram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DiagramError("diagram document must be an object")
    try:
        n = int(doc["components"])
        raw = doc.get("crossings", [])
        circles = list(doc.get("circles", [0] * n))
        bases = list(doc.get("base_arcs", [None] * n))
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(f"missing or malformed field: {exc}") from exc
    if len(circles) != n or len(bases) != n:
        raise DiagramError("circles/base_arcs must have one entry per component")
    xs = []
    for r in raw:
        try:
            sign = {"+": 1, "-": -1, 1: 1, -1: -1}[r["sign"]]
            xs.append(Crossing(int(r["id"]), sign, tuple(int(a) for a in r["arcs"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise DiagramError(f"bad crossing record {r!r}") from exc
    for c, (k, b) in enumerate(zip(circles, bases)):
        if (b is None) != (k == 1) or k not in (0, 1):
            raise DiagramError(f"component {c}: circle count {k} inconsistent with base arc {b}")
    return LinkDiagram(tuple(xs), tuple(None if b is None else int(b) for b in bases))


def load(path) -> LinkDiagram:
    with open(path) as fh:
        return from_json(fh.read())


def save(d: LinkDiagram, path):
    with open(path, "w") as fh:
        fh.write(to_json(d))


# ---------------------------------------------------------------- smoothing


def _relabel_components(xs: tuple[Crossing, ...], n_loops: int) -> LinkDiagram:
    """Diagram from crossings alone: base arcs are the least arc of each cycle."""
    tmp = LinkDiagram(xs, ())
    left = set(tmp.arcs())
    bases: list[int | None] = []
    while left:
        b = min(left)
        bases.append(b)
        a = b
        while True:
            left.discard(a)
            a = tmp.next_arc(a)
            if a == b:
                break
    bases.extend([None] * n_loops)
    return LinkDiagram(xs, tuple(bases))


def smooth_oriented(d: LinkDiagram, cid: int) -> LinkDiagram:
    """The diagram ``L0`` of a Conway triple: crossing ``cid`` smoothed along the orientation."""
    x = d.crossing(cid)
    # incoming under joins outgoing over; incoming over joins outgoing under
    joins = [(x.arcs[UNDER_IN], x.arcs[x.over_out]), (x.arcs[x.over_in], x.arcs[UNDER_OUT])]
    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    for a, b in joins:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    kept = tuple(
        Crossing(y.id, y.sign, tuple(find(a) for a in y.arcs)) for y in d.crossings if y.id != cid
    )
    used = {a for y in kept for a in y.arcs}
    loops = {find(a) for a in x.arcs} - used
    return _relabel_components(kept, len(loops) + d.n_circles)
