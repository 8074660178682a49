"""Small named diagrams used by tests, scripts and the CLI."""

from __future__ import annotations

from .diagram import Crossing, LinkDiagram, _relabel_components, mirror


def infer_signs(pd: list[tuple[int, int, int, int]]) -> list[int]:
    """Signs of a PD code whose arcs increase along each component."""
    # arcs of a component form a run of consecutive integers; find the runs
    # by following under-strands a -> c and over-strands across crossings
    nbr: dict[int, set[int]] = {}
    for a, b, c, d in pd:
        nbr.setdefault(a, set()).add(c)
        nbr.setdefault(c, set()).add(a)
        nbr.setdefault(b, set()).add(d)
        nbr.setdefault(d, set()).add(b)
    comp: dict[int, list[int]] = {}
    for start in sorted(nbr):
        if start in comp:
            continue
        stack, members = [start], []
        seen = {start}
        while stack:
            u = stack.pop()
            members.append(u)
            for v in nbr[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        members.sort()
        for m in members:
            comp[m] = members

    def successor(u):
        ms = comp[u]
        return ms[(ms.index(u) + 1) % len(ms)]

    signs = []
    for a, b, c, d in pd:
        if successor(d) == b and (successor(b) != d or len(comp[b]) > 2):
            signs.append(1)
        elif successor(b) == d:
            signs.append(-1)
        elif b == d:
            # a loop on the over strand: direction fixed by the under strand
            signs.append(1 if successor(a) == c else -1)
        else:
            raise ValueError(f"cannot infer sign of {(a, b, c, d)}")
    return signs


def from_knot_pd(pd, signs=None) -> LinkDiagram:
    pd = [tuple(x) for x in pd]
    signs = infer_signs(pd) if signs is None else signs
    xs = tuple(Crossing(i + 1, s, x) for i, (x, s) in enumerate(zip(pd, signs)))
    return _relabel_components(xs, 0)


def unknot() -> LinkDiagram:
    return LinkDiagram((), (None,))


def empty() -> LinkDiagram:
    return LinkDiagram((), ())


def kink(sign: int = 1) -> LinkDiagram:
    """One-crossing unknot diagram."""
    if sign > 0:
        return LinkDiagram((Crossing(1, 1, (1, 1, 2, 2)),), (1,))
    return LinkDiagram((Crossing(1, -1, (1, 2, 2, 1)),), (1,))


def double_kink() -> LinkDiagram:
    """Unknot with one positive and one negative kink; writhe 0."""
    return LinkDiagram(
        (Crossing(1, 1, (1, 1, 2, 3)), Crossing(2, -1, (4, 2, 3, 4))),
        (1,),
    )


def hopf(sign: int = 1) -> LinkDiagram:
    d = LinkDiagram(
        (Crossing(1, 1, (1, 3, 2, 4)), Crossing(2, 1, (3, 1, 4, 2))),
        (1, 3),
    )
    return d if sign > 0 else mirror(d)


def r2_unlink() -> LinkDiagram:
    """Two-component unlink drawn with a Reidemeister-II bigon."""
    return LinkDiagram(
        (Crossing(1, 1, (1, 4, 2, 3)), Crossing(2, -1, (2, 4, 1, 3))),
        (1, 3),
    )


def trefoil(sign: int = 1) -> LinkDiagram:
    d = from_knot_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)])
    if all(x.sign == sign for x in d.crossings):
        return d
    return mirror(d)


def figure_eight() -> LinkDiagram:
    return from_knot_pd([(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)])


def cinquefoil() -> LinkDiagram:
    return from_knot_pd([(1, 7, 2, 6), (3, 9, 4, 8), (5, 1, 6, 10), (7, 3, 8, 2), (9, 5, 10, 4)])


def three_twist() -> LinkDiagram:
    return from_knot_pd([(1, 5, 2, 4), (3, 9, 4, 8), (5, 1, 6, 10), (7, 3, 8, 2), (9, 7, 10, 6)])


def torus_link_2_4() -> LinkDiagram:
    return from_knot_pd([(6, 1, 7, 2), (8, 3, 5, 4), (2, 5, 3, 6), (4, 7, 1, 8)])


NAMED = {
    "unknot": unknot,
    "empty": empty,
    "kink": kink,
    "negative-kink": lambda: kink(-1),
    "double-kink": double_kink,
    "hopf": hopf,
    "negative-hopf": lambda: hopf(-1),
    "r2-unlink": r2_unlink,
    "trefoil": trefoil,
    "left-trefoil": lambda: trefoil(-1),
    "figure-eight": figure_eight,
    "cinquefoil": cinquefoil,
    "three-twist": three_twist,
    "torus-link-2-4": torus_link_2_4,
}


def get(name: str) -> LinkDiagram:
    return NAMED[name]()
