"""Slow, independent reference implementations used only by the tests.

They work on raw crossing data with sympy arithmetic and share no code with
the package beyond reading the diagram's fields.
"""

from __future__ import annotations

from itertools import combinations, product

import sympy as sp

A, q = sp.symbols("A q")

# slot pairs joined by the two smoothings of X[a, b, c, d]
SMOOTHING = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2))}


def count_loops(crossings, choice, free_loops: int) -> int:
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, bit in zip(crossings, choice):
        for s, t in SMOOTHING[bit]:
            parent[find(x.arcs[s])] = find(x.arcs[t])
    roots = {find(a) for x in crossings for a in x.arcs}
    return len(roots) + free_loops


def bracket(d, forced: dict[int, int] | None = None):
    """Unnormalised bracket in A, optionally with some crossings pre-smoothed."""
    forced = forced or {}
    xs = list(d.crossings)
    free = list(d.circles).count(1)
    total = 0
    for choice in product((0, 1), repeat=len(xs)):
        if any(choice[k] != forced[x.id] for k, x in enumerate(xs) if x.id in forced):
            continue
        weight = sp.Integer(1)
        for k, x in enumerate(xs):
            if x.id not in forced:
                weight *= A if choice[k] == 0 else 1 / A
        total += weight * (-A**2 - A**-2) ** count_loops(xs, choice, free)
    return sp.expand(total)


def jones(d):
    """``(-1)^{n-} q^{n+ - 2n-} Σ_s (-q)^{|s|} (q + 1/q)^{loops}``."""
    xs = list(d.crossings)
    free = list(d.circles).count(1)
    npos = sum(1 for x in xs if x.sign > 0)
    nneg = len(xs) - npos
    total = 0
    for choice in product((0, 1), repeat=len(xs)):
        total += (-q) ** sum(choice) * (q + 1 / q) ** count_loops(xs, choice, free)
    return sp.expand((-1) ** nneg * q ** (npos - 2 * nneg) * total)


def to_sympy(p):
    var = A if p.var == "A" else q
    return sp.expand(sum(c * var**e for e, c in p.items()))


def pairings(shape, k):
    """Brute force: every k-subset of nearest-neighbour edges that is disjoint."""
    edges = [(c, p) for c, n in enumerate(shape, start=1) for p in range(1, n)]
    out = []
    for sub in combinations(edges, k):
        dots = [(c, p + t) for c, p in sub for t in (0, 1)]
        if len(set(dots)) == len(dots):
            out.append(tuple(sorted(sub)))
    return sorted(out)


def smith(dense):
    """Nonzero invariant factors, ascending and positive."""
    m = sp.Matrix(dense)
    if 0 in m.shape:
        return []
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(m, domain=sp.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return sorted(v for v in diag if v)


def rank_q(dense) -> int:
    m = sp.Matrix(dense)
    return 0 if 0 in m.shape else m.rank()
