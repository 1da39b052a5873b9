"""Pure-python backend for the hot kernels.

Mirrors the compiled backend (``probcore._kernels``) operation for
operation. The two backends must produce bit-identical results: every
floating-point operation here is performed in the same order as in the
compiled loops, so peeling decisions never diverge between them.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def pb_pmf(probs):
    """Distribution of the number of present edges among independent edges.

    Returns Pr[count == t] for t = 0..d as a float64 array of length d+1,
    built by absorbing one edge at a time into a rolling row.
    """
    p = np.ascontiguousarray(probs, dtype=np.float64)
    d = p.shape[0]
    f = np.zeros(d + 1, dtype=np.float64)
    f[0] = 1.0
    for i in range(d):
        pi = p[i]
        qi = 1.0 - pi
        f[1:] = f[1:] * qi + f[:-1] * pi
        f[0] *= qi
    return f


def eta_degree(probs, eta):
    """Largest t with Pr[count >= t] >= eta; 0 when no positive t qualifies."""
    f = pb_pmf(probs)
    d = f.shape[0] - 1
    s = 0.0
    for t in range(d, 0, -1):
        s += float(f[t])
        if s >= eta:
            return t
    return 0


def peel(indptr, indices, probs, alive, bounds, eta):
    """Bucket-array peeling with lazy exact recomputation.

    ``alive`` marks the vertices to decompose, ``bounds`` holds their
    initial degree estimates (any values within [0, alive-restricted
    degree] give the same output). Returns int64 core numbers, -1 for
    vertices that are not alive.

    Vertices are kept in an array ``A`` sorted by the current estimate
    ``d``; ``bin_start[k]`` is the first slot of the block with value k.
    A scan finalizes the leftmost vertex once its estimate is exact
    (``valid``); recomputed estimates are clamped below by the largest
    value finalized so far, which keeps the scan monotone even when the
    initial bounds overshoot.
    """
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    alive = np.ascontiguousarray(alive, dtype=np.uint8)
    bounds = np.ascontiguousarray(bounds, dtype=np.int64)
    eta = float(eta)

    n = alive.shape[0]
    core = np.full(n, -1, dtype=np.int64)
    alive_ids = np.flatnonzero(alive)
    na = alive_ids.size
    if na == 0:
        return core

    alive_bool = alive.view(bool)
    d = np.zeros(n, dtype=np.int64)
    d[alive_ids] = bounds[alive_ids]

    # block ceiling: nothing can exceed the alive-restricted degree
    entry_alive = alive_bool[indices].astype(np.int64)
    csum = np.zeros(entry_alive.shape[0] + 1, dtype=np.int64)
    np.cumsum(entry_alive, out=csum[1:])
    deg_alive = csum[indptr[1:]] - csum[indptr[:-1]]
    maxval = int(max(deg_alive[alive_ids].max(), d[alive_ids].max()))

    order = np.argsort(d[alive_ids], kind="stable")
    A = alive_ids[order]
    pos = np.full(n, -1, dtype=np.int64)
    pos[A] = np.arange(na)
    binc = np.bincount(d[alive_ids], minlength=maxval + 1)
    bin_start = np.zeros(maxval + 2, dtype=np.int64)
    np.cumsum(binc, out=bin_start[1:])

    gone = np.zeros(n, dtype=np.uint8)
    valid = np.zeros(n, dtype=np.uint8)

    def recompute(u):
        lo, hi = indptr[u], indptr[u + 1]
        nb = indices[lo:hi]
        keep = alive_bool[nb] & (gone[nb] == 0)
        pu = probs[lo:hi][keep]
        return eta_degree(pu, eta)

    def move_right(u, frm, to):
        for val in range(frm, to):
            last = bin_start[val + 1] - 1
            pu = pos[u]
            w = A[last]
            A[pu] = w
            A[last] = u
            pos[w] = pu
            pos[u] = last
            bin_start[val + 1] -= 1

    def move_left(u, frm, to):
        for val in range(frm, to, -1):
            first = bin_start[val]
            pu = pos[u]
            w = A[first]
            A[pu] = w
            A[first] = u
            pos[w] = pu
            pos[u] = first
            bin_start[val] += 1

    level = 0
    i = 0
    while i < na:
        v = A[i]
        if valid[v]:
            gone[v] = 1
            dv = int(d[v])
            core[v] = dv
            level = dv
            for idx in range(indptr[v], indptr[v + 1]):
                u = indices[idx]
                if not alive[u] or gone[u]:
                    continue
                if d[u] == dv and not valid[u]:
                    e = recompute(u)
                    if e < dv:
                        e = dv
                    move_right(u, dv, e)
                    d[u] = e
                    valid[u] = 1
                if d[u] > dv:
                    move_left(u, int(d[u]), int(d[u]) - 1)
                    d[u] -= 1
                    valid[u] = 0
            i += 1
        else:
            e = recompute(v)
            if e < level:
                e = level
            cur = int(d[v])
            if e > cur:
                move_right(v, cur, e)
            elif e < cur:
                move_left(v, cur, e)
            d[v] = e
            valid[v] = 1
    return core
