"""Sparse exact linear algebra: ranks over F_p and Smith normal form over Z.

Both paths share one sparse elimination kernel.  Over F_p every nonzero
entry is a pivot candidate; over Z only entries of magnitude one are, and
whatever survives is handed to a dense fraction-free Smith reduction.
"""

from __future__ import annotations

import heapq

import numpy as np
from numba import njit, types
from numba.typed import List

LARGE_PRIME = 2_147_483_629  # below 2^31, so products fit in int64
_INT_LIMIT = 1 << 52


@njit(cache=True)
def _merge(c1, v1, c2, v2, f, p):
    """Return (row1 + f * row2) as sorted (cols, vals), dropping zeros."""
    n1 = c1.shape[0]
    n2 = c2.shape[0]
    oc = np.empty(n1 + n2, dtype=np.int64)
    ov = np.empty(n1 + n2, dtype=np.int64)
    a = 0
    b = 0
    k = 0
    while a < n1 or b < n2:
        if b >= n2 or (a < n1 and c1[a] < c2[b]):
            oc[k] = c1[a]
            ov[k] = v1[a]
            a += 1
            k += 1
        elif a >= n1 or c2[b] < c1[a]:
            val = f * v2[b]
            if p > 0:
                val %= p
            oc[k] = c2[b]
            ov[k] = val
            b += 1
            k += 1
        else:
            val = v1[a] + f * v2[b]
            if p > 0:
                val %= p
            if val != 0:
                oc[k] = c1[a]
                ov[k] = val
                k += 1
            a += 1
            b += 1
    return oc[:k], ov[:k]


@njit(cache=True)
def _inv_mod(a, p):
    # Fermat inverse
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True)
def _eliminate(indptr, indices, data, ncols, p, limit):
    """Sparse elimination on a CSR matrix.

    ``p > 0``: arithmetic mod p, any entry may pivot.  ``p == 0``: integer
    arithmetic, only entries of magnitude one pivot.  Returns
    (pivot count, overflow flag, active row flags, row list) so the caller
    can recover the unreduced core.
    """
    nrows = indptr.shape[0] - 1
    rc = List()
    rv = List()
    for r in range(nrows):
        a = indices[indptr[r]:indptr[r + 1]].copy()
        b = data[indptr[r]:indptr[r + 1]].copy()
        if p > 0:
            b = b % p
        order = np.argsort(a)
        a = a[order]
        b = b[order]
        keep = b != 0
        rc.append(a[keep])
        rv.append(b[keep])
    col_count = np.zeros(ncols, dtype=np.int64)
    col_cap = np.zeros(ncols, dtype=np.int64)
    for r in range(nrows):
        for c in rc[r]:
            col_cap[c] += 1
    col_rows = List()
    for c in range(ncols):
        col_rows.append(np.empty(max(col_cap[c], 1), dtype=np.int64))
    col_len = np.zeros(ncols, dtype=np.int64)
    for r in range(nrows):
        for c in rc[r]:
            col_rows[c][col_len[c]] = r
            col_len[c] += 1
            col_count[c] += 1
    row_active = np.ones(nrows, dtype=np.bool_)
    col_active = np.ones(ncols, dtype=np.bool_)
    heap = [(np.int64(0), np.int64(0))]
    heap.pop()
    for r in range(nrows):
        if rc[r].shape[0] > 0:
            heap.append((np.int64(rc[r].shape[0]), np.int64(r)))
        else:
            row_active[r] = False
    heapq.heapify(heap)
    rank = 0
    overflow = False
    while len(heap) > 0:
        ln, r = heapq.heappop(heap)
        if not row_active[r] or rc[r].shape[0] != ln:
            continue
        cols = rc[r]
        vals = rv[r]
        best = -1
        bestcount = 1 << 62
        for t in range(cols.shape[0]):
            if p == 0 and vals[t] != 1 and vals[t] != -1:
                continue
            cnt = col_count[cols[t]]
            if cnt < bestcount:
                bestcount = cnt
                best = t
        if best < 0:
            continue  # no unit entry yet; revisited if the row changes
        c = cols[best]
        pv = vals[best]
        if p > 0:
            pinv = _inv_mod(pv, p)
        else:
            pinv = pv
        rank += 1
        row_active[r] = False
        col_active[c] = False
        for t in range(cols.shape[0]):
            col_count[cols[t]] -= 1
        lst = col_rows[c]
        for t in range(col_len[c]):
            r2 = lst[t]
            if r2 == r or not row_active[r2]:
                continue
            c2 = rc[r2]
            v2 = rv[r2]
            # locate column c in r2
            lo = 0
            hi = c2.shape[0]
            while lo < hi:
                mid = (lo + hi) // 2
                if c2[mid] < c:
                    lo = mid + 1
                else:
                    hi = mid
            if lo >= c2.shape[0] or c2[lo] != c:
                continue  # stale entry
            a = v2[lo]
            if p > 0:
                f = (p - (a * pinv) % p) % p
            else:
                f = -a * pinv
            nc, nv = _merge(c2, v2, cols, vals, f, p)
            if p == 0:
                for x in nv:
                    if x > limit or x < -limit:
                        overflow = True
            # update column bookkeeping
            i1 = 0
            i2 = 0
            while i1 < c2.shape[0] or i2 < nc.shape[0]:
                if i2 >= nc.shape[0] or (i1 < c2.shape[0] and c2[i1] < nc[i2]):
                    col_count[c2[i1]] -= 1
                    i1 += 1
                elif i1 >= c2.shape[0] or nc[i2] < c2[i1]:
                    cc = nc[i2]
                    col_count[cc] += 1
                    if col_len[cc] >= col_rows[cc].shape[0]:
                        bigger = np.empty(2 * col_rows[cc].shape[0], dtype=np.int64)
                        bigger[: col_len[cc]] = col_rows[cc][: col_len[cc]]
                        col_rows[cc] = bigger
                    col_rows[cc][col_len[cc]] = r2
                    col_len[cc] += 1
                    i2 += 1
                else:
                    i1 += 1
                    i2 += 1
            rc[r2] = nc
            rv[r2] = nv
            if nc.shape[0] == 0:
                row_active[r2] = False
            else:
                heapq.heappush(heap, (np.int64(nc.shape[0]), np.int64(r2)))
            if overflow:
                break
        col_len[c] = 0
        if overflow:
            break
    return rank, overflow, row_active, col_active, rc, rv


def _csr(rows, cols, vals, shape):
    from scipy.sparse import coo_matrix

    m = coo_matrix(
        (np.asarray(vals, dtype=np.int64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=shape,
    ).tocsr()
    m.sum_duplicates()
    return m


def rank_mod_p(rows, cols, vals, shape, p: int = LARGE_PRIME) -> int:
    """Rank over F_p of the sparse matrix given in coordinate form."""
    nr, nc = shape
    if nr == 0 or nc == 0 or len(rows) == 0:
        return 0
    m = _csr(rows, cols, np.asarray(vals, dtype=np.int64) % p, shape)
    # eliminate along the shorter dimension's rows for less bookkeeping
    if nr > nc:
        m = m.T.tocsr()
        nc = nr
    rank, *_ = _eliminate(
        m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data.astype(np.int64), m.shape[1], p, 0
    )
    return int(rank)


def smith_invariants(rows, cols, vals, shape) -> list[int]:
    """Nonzero invariant factors of an integer sparse matrix, ascending."""
    nr, nc = shape
    if nr == 0 or nc == 0 or len(rows) == 0:
        return []
    m = _csr(rows, cols, vals, shape)
    rank, overflow, row_active, col_active, rc, rv = _eliminate(
        m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data.astype(np.int64), nc, 0, _INT_LIMIT
    )
    if overflow:
        # start over with arbitrary-precision dense arithmetic
        dense = [[0] * nc for _ in range(nr)]
        for r, c, v in zip(rows, cols, vals):
            dense[int(r)][int(c)] += int(v)
        return dense_smith(dense)
    ones = [1] * int(rank)
    live_rows = [r for r in range(nr) if row_active[r] and len(rc[r])]
    if not live_rows:
        return ones
    live_cols = sorted({int(c) for r in live_rows for c in rc[r]})
    cindex = {c: k for k, c in enumerate(live_cols)}
    core = [[0] * len(live_cols) for _ in live_rows]
    for k, r in enumerate(live_rows):
        for c, v in zip(rc[r], rv[r]):
            core[k][cindex[int(c)]] = int(v)
    return ones + dense_smith(core)


def dense_smith(mat: list[list[int]]) -> list[int]:
    """Invariant factors by fraction-free reduction, pivoting on the smallest magnitude."""
    a = [row[:] for row in mat if any(row)]
    factors: list[int] = []
    while a and a[0]:
        nr, nc = len(a), len(a[0])
        best = None
        for i in range(nr):
            for j in range(nc):
                v = a[i][j]
                if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
                    if abs(v) == 1:
                        break
            if best and abs(a[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        i, j = best
        a[0], a[i] = a[i], a[0]
        for row in a:
            row[0], row[j] = row[j], row[0]
        while True:
            pv = a[0][0]
            dirty = False
            for i in range(1, nr):
                if a[i][0]:
                    qt = a[i][0] // pv
                    if qt:
                        a[i] = [x - qt * y for x, y in zip(a[i], a[0])]
                    if a[i][0]:
                        dirty = True
            for j in range(1, nc):
                if a[0][j]:
                    qt = a[0][j] // pv
                    if qt:
                        for row in a:
                            row[j] -= qt * row[0]
                    if a[0][j]:
                        dirty = True
            if not dirty:
                # pivot must divide the rest for a diagonal in Smith form
                bad = next(
                    ((i, j) for i in range(1, nr) for j in range(1, nc) if a[i][j] % pv),
                    None,
                )
                if bad is None:
                    break
                a[0] = [x + y for x, y in zip(a[0], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/column 0 to the pivot
            cand = [(abs(a[i][0]), i, 0) for i in range(nr) if a[i][0]]
            cand += [(abs(a[0][j]), 0, j) for j in range(nc) if a[0][j]]
            _, i, j = min(cand)
            if i:
                a[0], a[i] = a[i], a[0]
            if j:
                for row in a:
                    row[0], row[j] = row[j], row[0]
        factors.append(abs(a[0][0]))
        a = [row[1:] for row in a[1:] if any(row[1:])]
    factors.sort()
    return factors


def rank_over(rows, cols, vals, shape, ring: str) -> int:
    if ring == "Z2":
        return rank_mod_p(rows, cols, vals, shape, 2)
    return rank_mod_p(rows, cols, vals, shape, LARGE_PRIME)
