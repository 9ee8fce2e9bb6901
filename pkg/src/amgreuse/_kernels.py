"""Compiled CSR loops. Arrays in, arrays out; no validation here."""

import numpy as np
from numba import njit

_jit = njit(cache=True, nogil=True)


@_jit
def spmv(indptr, indices, data, x, y):
    n = indptr.shape[0] - 1
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s += data[p] * x[indices[p]]
        y[i] = s


@_jit
def residual(indptr, indices, data, f, u, r):
    n = indptr.shape[0] - 1
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s += data[p] * u[indices[p]]
        r[i] = f[i] - s


@_jit
def jacobi_sweep(indptr, indices, data, inv_diag, omega, f, u, work):
    # work receives the residual so the update uses only old values of u
    n = indptr.shape[0] - 1
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s += data[p] * u[indices[p]]
        work[i] = f[i] - s
    for i in range(n):
        u[i] += omega * inv_diag[i] * work[i]


@_jit
def diagonal(indptr, indices, data, n):
    d = np.zeros(n)
    found = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            if indices[p] == i:
                d[i] = data[p]
                found[i] = True
                break
    return d, found


@_jit
def transpose(nrows, ncols, indptr, indices, data):
    nnz = indptr[nrows]
    tptr = np.zeros(ncols + 1, dtype=np.int64)
    for p in range(nnz):
        tptr[indices[p] + 1] += 1
    for j in range(ncols):
        tptr[j + 1] += tptr[j]
    fill = tptr[:-1].copy()
    tidx = np.empty(nnz, dtype=np.int64)
    tval = np.empty(nnz, dtype=data.dtype)
    for i in range(nrows):
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            q = fill[j]
            tidx[q] = i
            tval[q] = data[p]
            fill[j] = q + 1
    return tptr, tidx, tval


@_jit
def _insertion_sort(a, lo, hi):
    # rows are short; avoids a temporary per row
    for p in range(lo + 1, hi):
        v = a[p]
        q = p - 1
        while q >= lo and a[q] > v:
            a[q + 1] = a[q]
            q -= 1
        a[q + 1] = v


@_jit
def spmm_symbolic(nrows, ncols, aptr, aidx, bptr, bidx):
    # one pass into an upper-bound buffer, then compact
    cap = 0
    for p in range(aptr[nrows]):
        k = aidx[p]
        cap += bptr[k + 1] - bptr[k]
    marker = np.full(ncols, -1, dtype=np.int64)
    cptr = np.zeros(nrows + 1, dtype=np.int64)
    buf = np.empty(cap, dtype=np.int64)
    pos = 0
    for i in range(nrows):
        start = pos
        for p in range(aptr[i], aptr[i + 1]):
            k = aidx[p]
            for q in range(bptr[k], bptr[k + 1]):
                j = bidx[q]
                if marker[j] != i:
                    marker[j] = i
                    buf[pos] = j
                    pos += 1
        _insertion_sort(buf, start, pos)
        cptr[i + 1] = pos
    return cptr, buf[:pos].copy()


@_jit
def spmm_numeric(nrows, ncols, aptr, aidx, aval, bptr, bidx, bval, cptr, cidx):
    """Returns (values, bad_row); bad_row >= 0 flags a product entry missing from the pattern."""
    slot = np.full(ncols, -1, dtype=np.int64)
    cval = np.zeros(cptr[nrows])
    for i in range(nrows):
        for p in range(cptr[i], cptr[i + 1]):
            slot[cidx[p]] = p
        for p in range(aptr[i], aptr[i + 1]):
            k = aidx[p]
            a = aval[p]
            for q in range(bptr[k], bptr[k + 1]):
                s = slot[bidx[q]]
                if s < 0:
                    return cval, i
                cval[s] += a * bval[q]
        for p in range(cptr[i], cptr[i + 1]):
            slot[cidx[p]] = -1
    return cval, -1


@_jit
def strong_edges(indptr, indices, data, eps2):
    """Directed strong couplings |a_ij|^2 > eps^2 |a_ii a_jj|; returns (row_ptr, cols, zero_diag_row)."""
    n = indptr.shape[0] - 1
    diag = np.zeros(n)
    for i in range(n):
        found = False
        for p in range(indptr[i], indptr[i + 1]):
            if indices[p] == i:
                diag[i] = data[p]
                found = data[p] != 0.0
                break
        if not found:
            return np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64), i

    sptr = np.zeros(n + 1, dtype=np.int64)
    keep = np.zeros(indptr[n], dtype=np.bool_)
    for i in range(n):
        cnt = 0
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j != i:
                v = data[p]
                if v * v > eps2 * abs(diag[i] * diag[j]):
                    keep[p] = True
                    cnt += 1
        sptr[i + 1] = sptr[i] + cnt
    scol = np.empty(sptr[n], dtype=np.int64)
    q = 0
    for p in range(indptr[n]):
        if keep[p]:
            scol[q] = indices[p]
            q += 1
    return sptr, scol, -1


@_jit
def union_rows(n, aptr, aidx, bptr, bidx):
    """Row-wise merge of two sorted adjacency structures."""
    uptr = np.zeros(n + 1, dtype=np.int64)
    uidx = np.empty(aptr[n] + bptr[n], dtype=np.int64)
    pos = 0
    for i in range(n):
        p, pe = aptr[i], aptr[i + 1]
        q, qe = bptr[i], bptr[i + 1]
        while p < pe or q < qe:
            if q >= qe or (p < pe and aidx[p] < bidx[q]):
                uidx[pos] = aidx[p]
                p += 1
            elif p >= pe or bidx[q] < aidx[p]:
                uidx[pos] = bidx[q]
                q += 1
            else:
                uidx[pos] = aidx[p]
                p += 1
                q += 1
            pos += 1
        uptr[i + 1] = pos
    return uptr, uidx[:pos].copy()


@_jit
def greedy_aggregate(n, gptr, gidx):
    agg = np.full(n, -1, dtype=np.int64)
    n_coarse = 0
    # pass 1: roots absorb their unaggregated strong neighbours
    for i in range(n):
        if agg[i] >= 0:
            continue
        free = False
        for p in range(gptr[i], gptr[i + 1]):
            if agg[gidx[p]] < 0:
                free = True
                break
        if not free:
            continue
        agg[i] = n_coarse
        for p in range(gptr[i], gptr[i + 1]):
            j = gidx[p]
            if agg[j] < 0:
                agg[j] = n_coarse
        n_coarse += 1
    # pass 2: attach leftovers to the lowest-indexed aggregated neighbour
    for i in range(n):
        if agg[i] >= 0:
            continue
        if gptr[i + 1] == gptr[i]:
            agg[i] = n_coarse
            n_coarse += 1
            continue
        for p in range(gptr[i], gptr[i + 1]):
            j = gidx[p]
            if agg[j] >= 0:
                agg[i] = agg[j]
                break
    return agg, n_coarse
