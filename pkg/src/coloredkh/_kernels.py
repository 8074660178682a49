"""Numba kernels for circle tables and Khovanov differentials."""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_CIRCLES = 62


@njit(cache=True)
def circle_tables(n_cross, n_arcs, joins_a, joins_b, free_circles):
    """For every marker mask: circle number of each arc and the circle count.

    Circles are numbered by their least arc.  ``joins_*`` has shape
    (n_cross, 2, 2) holding arc indices joined by each smoothing.
    """
    n_masks = 1 << n_cross
    owner = np.empty((n_masks, max(n_arcs, 1)), dtype=np.int16)
    ncirc = np.empty(n_masks, dtype=np.int16)
    reps = np.full((n_masks, max(n_arcs, 1)), -1, dtype=np.int16)
    parent = np.empty(max(n_arcs, 1), dtype=np.int64)
    label = np.empty(max(n_arcs, 1), dtype=np.int64)
    for mask in range(n_masks):
        for u in range(n_arcs):
            parent[u] = u
        for k in range(n_cross):
            if (mask >> k) & 1:
                jp = joins_b[k]
            else:
                jp = joins_a[k]
            for t in range(2):
                u = jp[t, 0]
                v = jp[t, 1]
                while parent[u] != u:
                    u = parent[u]
                while parent[v] != v:
                    v = parent[v]
                if u != v:
                    if u < v:
                        parent[v] = u
                    else:
                        parent[u] = v
        cnt = 0
        for u in range(n_arcs):
            label[u] = -1
        for u in range(n_arcs):
            r = u
            while parent[r] != r:
                r = parent[r]
            if label[r] < 0:
                label[r] = cnt
                reps[mask, cnt] = u
                cnt += 1
            owner[mask, u] = label[r]
        ncirc[mask] = cnt + free_circles
    return owner, ncirc, reps


@njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def binom_table(nmax):
    t = np.zeros((nmax + 1, nmax + 1), dtype=np.int64)
    for a in range(nmax + 1):
        t[a, 0] = 1
        for b in range(1, a + 1):
            t[a, b] = t[a - 1, b - 1] + t[a - 1, b]
    return t


@njit(cache=True)
def colex_rank(labels, binom):
    r = 0
    t = 1
    pos = 0
    while labels:
        if labels & 1:
            r += binom[pos, t]
            t += 1
        labels >>= 1
        pos += 1
    return r


@njit(cache=True)
def slice_offsets(n_cross, ncirc, n_neg_marker, n_x, binom):
    """Generator offsets per mask for the slice with the given marker and x counts.

    ``n_x`` is an array over masks of the required number of x labels
    (negative when the slice is empty for that mask).  Returns offsets
    (-1 for masks not in the slice) and the slice size.
    """
    n_masks = 1 << n_cross
    off = np.full(n_masks, -1, dtype=np.int64)
    total = 0
    for mask in range(n_masks):
        if popcount(mask) != n_neg_marker:
            continue
        x = n_x[mask]
        c = ncirc[mask]
        if x < 0 or x > c:
            continue
        off[mask] = total
        total += binom[c, x]
    return off, total


@njit(cache=True)
def _next_same_popcount(v):
    t = v | (v - 1)
    return (t + 1) | (((~t & -(~t)) - 1) >> (_ctz(v) + 1))


@njit(cache=True)
def _ctz(v):
    c = 0
    while (v & 1) == 0:
        v >>= 1
        c += 1
    return c


@njit(cache=True)
def differential_coo(n_cross, arcs_of, owner, ncirc, reps, off_src, off_tgt, x_src, binom):
    """COO entries of d from one (i, j) slice to the next.

    ``arcs_of`` has shape (n_cross, 4) with arc indices of the PD slots.
    Signs follow the ascending negative-marker convention.
    """
    n_masks = 1 << n_cross
    cap = 1024
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.int64)
    nnz = 0
    newmap = np.empty(MAX_CIRCLES + 2, dtype=np.int64)
    for mask in range(n_masks):
        base = off_src[mask]
        if base < 0:
            continue
        c_old = ncirc[mask]
        xcount = x_src[mask]
        for k in range(n_cross):
            if (mask >> k) & 1:
                continue
            m2 = mask | (1 << k)
            tbase = off_tgt[m2]
            if tbase < 0:
                continue
            sign = 1
            if popcount(mask >> (k + 1)) & 1:
                sign = -1
            a0 = arcs_of[k, 0]
            a1 = arcs_of[k, 1]
            a2 = arcs_of[k, 2]
            ca = owner[mask, a0]
            cb = owner[mask, a2]
            merge = ca != cb
            c_new = ncirc[m2]
            # image of every old circle
            for c in range(c_old):
                r = reps[mask, c]
                if r >= 0:
                    newmap[c] = owner[m2, r]
                else:
                    # crossingless circles keep their position after arc circles
                    newmap[c] = c_new - (c_old - c)
            if merge:
                cn = owner[m2, a0]
                cn1 = cn
                cn2 = cn
            else:
                cn1 = owner[m2, a0]
                cn2 = owner[m2, a1]
            # enumerate source labels with xcount x's
            if xcount == 0:
                labels = 0
            else:
                labels = (1 << xcount) - 1
            limit = 1 << c_old
            idx = 0
            while labels < limit:
                rest = 0
                for c in range(c_old):
                    if c == ca or c == cb:
                        continue
                    if (labels >> c) & 1:
                        rest |= 1 << newmap[c]
                la = (labels >> ca) & 1
                if merge:
                    lb = (labels >> cb) & 1
                    if la + lb <= 1:
                        out = rest
                        if la + lb == 1:
                            out |= 1 << cn
                        t = tbase + colex_rank(out, binom)
                        if nnz + 2 > cap:
                            cap *= 2
                            rows = _grow(rows, cap)
                            cols = _grow(cols, cap)
                            vals = _grow(vals, cap)
                        rows[nnz] = t
                        cols[nnz] = base + idx
                        vals[nnz] = sign
                        nnz += 1
                else:
                    if nnz + 2 > cap:
                        cap *= 2
                        rows = _grow(rows, cap)
                        cols = _grow(cols, cap)
                        vals = _grow(vals, cap)
                    if la == 1:
                        out = rest | (1 << cn1) | (1 << cn2)
                        rows[nnz] = tbase + colex_rank(out, binom)
                        cols[nnz] = base + idx
                        vals[nnz] = sign
                        nnz += 1
                    else:
                        out = rest | (1 << cn1)
                        rows[nnz] = tbase + colex_rank(out, binom)
                        cols[nnz] = base + idx
                        vals[nnz] = sign
                        nnz += 1
                        out = rest | (1 << cn2)
                        rows[nnz] = tbase + colex_rank(out, binom)
                        cols[nnz] = base + idx
                        vals[nnz] = sign
                        nnz += 1
                idx += 1
                if labels == 0:
                    break
                labels = _next_same_popcount(labels)
    return rows[:nnz], cols[:nnz], vals[:nnz]


@njit(cache=True)
def _grow(a, cap):
    b = np.empty(cap, dtype=a.dtype)
    b[: a.shape[0]] = a
    return b
