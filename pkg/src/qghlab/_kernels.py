"""Compiled inner loops for dense min-plus work on distance matrices."""

import numba as nb
import numpy as np

_FLOOR = -1e300


@nb.njit(cache=True, nogil=True)
def min_plus(a, b):
    """``c[i, j] = min_k a[i, k] + b[k, j]``."""
    m, K = a.shape
    n = b.shape[1]
    c = np.full((m, n), np.inf)
    for i in range(m):
        for k in range(K):
            aik = a[i, k]
            if aik >= np.inf:
                continue
            for j in range(n):
                v = aik + b[k, j]
                if v < c[i, j]:
                    c[i, j] = v
    return c


@nb.njit(cache=True, nogil=True, fastmath=True)
def _excess_row(d, i, out):
    # out[k] = max_j d[i, j] - d[j, k]; the inner loop is an elementwise max over
    # a contiguous row, which vectorizes
    n = d.shape[0]
    out[:] = _FLOOR
    for j in range(n):
        dij = d[i, j]
        for k in range(n):
            v = dij - d[j, k]
            if v > out[k]:
                out[k] = v


@nb.njit(cache=True, nogil=True)
def max_triangle_excess(d):
    """Largest ``d[i, j] - d[i, k] - d[k, j]`` over all triples, and its witness.

    `d` must be symmetric with finite entries.
    """
    n = d.shape[0]
    row = np.empty(n)
    worst = _FLOOR
    wi = wk = 0
    for i in range(n):
        _excess_row(d, i, row)
        for k in range(n):
            v = row[k] - d[i, k]
            if v > worst:
                worst = v
                wi, wk = i, k
    # recover the middle index of the worst triple
    wj = 0
    best = _FLOOR
    for j in range(n):
        v = d[wi, j] - d[wi, wk] - d[wk, j]
        if v > best:
            best, wj = v, j
    return best, wi, wj, wk
