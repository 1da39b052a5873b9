# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled backend for the hot kernels.

Mirrors ``probcore._kernels_py`` operation for operation; the two
backends must stay bit-identical. The degree distribution loop here is
triangular (row t of the rolling array is untouched until t edges have
been absorbed) which performs the exact same IEEE operations as the
full-width vector update on the python side, because the skipped slots
only ever combine zeros. Compiled with fp-contract off so no
multiply-add fusion can perturb that equivalence.
"""
import numpy as np

BACKEND_NAME = "native"


cdef int _dp_eta_degree(const double* p, Py_ssize_t d, double eta, double* f) noexcept nogil:
    cdef Py_ssize_t i, t
    cdef double pi, qi, s
    f[0] = 1.0
    for t in range(1, d + 1):
        f[t] = 0.0
    for i in range(d):
        pi = p[i]
        qi = 1.0 - pi
        for t in range(i + 1, 0, -1):
            f[t] = f[t] * qi + f[t - 1] * pi
        f[0] = f[0] * qi
    s = 0.0
    for t in range(d, 0, -1):
        s += f[t]
        if s >= eta:
            return <int> t
    return 0


def pb_pmf(probs):
    """Distribution of the number of present edges among independent edges."""
    p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t d = p.shape[0]
    out = np.zeros(d + 1, dtype=np.float64)
    cdef const double[::1] pv = p
    cdef double[::1] fv = out
    cdef Py_ssize_t i, t
    cdef double pi, qi
    fv[0] = 1.0
    for i in range(d):
        pi = pv[i]
        qi = 1.0 - pi
        for t in range(i + 1, 0, -1):
            fv[t] = fv[t] * qi + fv[t - 1] * pi
        fv[0] = fv[0] * qi
    return out


def eta_degree(probs, eta):
    """Largest t with Pr[count >= t] >= eta; 0 when no positive t qualifies."""
    p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t d = p.shape[0]
    f = np.empty(d + 1, dtype=np.float64)
    cdef const double[::1] pv = p
    cdef double[::1] fv = f
    cdef const double* pp = NULL
    if d > 0:
        pp = &pv[0]
    return _dp_eta_degree(pp, d, float(eta), &fv[0])


cdef inline void _move_right(long long[::1] A, long long[::1] pos,
                             long long[::1] bin_start, long long u,
                             long long frm, long long to) noexcept nogil:
    cdef long long val, last, pu, w
    for val in range(frm, to):
        last = bin_start[val + 1] - 1
        pu = pos[u]
        w = A[last]
        A[pu] = w
        A[last] = u
        pos[w] = pu
        pos[u] = last
        bin_start[val + 1] -= 1


cdef inline void _move_left(long long[::1] A, long long[::1] pos,
                            long long[::1] bin_start, long long u,
                            long long frm, long long to) noexcept nogil:
    cdef long long val, first, pu, w
    for val in range(frm, to, -1):
        first = bin_start[val]
        pu = pos[u]
        w = A[first]
        A[pu] = w
        A[first] = u
        pos[w] = pu
        pos[u] = first
        bin_start[val] += 1


def peel(indptr_in, indices_in, probs_in, alive_in, bounds_in, eta_in):
    """Bucket-array peeling with lazy exact recomputation.

    Same contract as the python backend: ``alive`` marks the vertices to
    decompose, ``bounds`` are their initial degree estimates, output is
    int64 core numbers with -1 for vertices that are not alive.
    """
    indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    probs = np.ascontiguousarray(probs_in, dtype=np.float64)
    alive = np.ascontiguousarray(alive_in, dtype=np.uint8)
    bounds = np.ascontiguousarray(bounds_in, dtype=np.int64)
    cdef double eta = float(eta_in)

    cdef Py_ssize_t n = alive.shape[0]
    core_arr = np.full(n, -1, dtype=np.int64)
    alive_ids = np.flatnonzero(alive)
    cdef Py_ssize_t na = alive_ids.size
    if na == 0:
        return core_arr

    alive_bool = alive.view(bool)
    d_arr = np.zeros(n, dtype=np.int64)
    d_arr[alive_ids] = bounds[alive_ids]

    # block ceiling: nothing can exceed the alive-restricted degree
    entry_alive = alive_bool[indices].astype(np.int64)
    csum = np.zeros(entry_alive.shape[0] + 1, dtype=np.int64)
    np.cumsum(entry_alive, out=csum[1:])
    deg_alive = csum[indptr[1:]] - csum[indptr[:-1]]
    cdef long long maxval = int(max(deg_alive[alive_ids].max(), d_arr[alive_ids].max()))

    order = np.argsort(d_arr[alive_ids], kind="stable")
    A_arr = np.ascontiguousarray(alive_ids[order], dtype=np.int64)
    pos_arr = np.full(n, -1, dtype=np.int64)
    pos_arr[A_arr] = np.arange(na)
    binc = np.bincount(d_arr[alive_ids], minlength=int(maxval) + 1)
    bin_start_arr = np.zeros(int(maxval) + 2, dtype=np.int64)
    np.cumsum(binc, out=bin_start_arr[1:])

    gone_arr = np.zeros(n, dtype=np.uint8)
    valid_arr = np.zeros(n, dtype=np.uint8)

    # scratch for the exact recomputations, sized by the widest row
    cdef long long maxdeg = int((indptr[1:] - indptr[:-1]).max()) if n > 0 else 0
    gp_arr = np.empty(max(int(maxdeg), 1), dtype=np.float64)
    f_arr = np.empty(int(maxdeg) + 1, dtype=np.float64)

    cdef const long long[::1] ip = indptr
    cdef const long long[::1] nb = indices
    cdef const double[::1] pr = probs
    cdef const unsigned char[::1] al = alive
    cdef long long[::1] core = core_arr
    cdef long long[::1] d = d_arr
    cdef long long[::1] A = A_arr
    cdef long long[::1] pos = pos_arr
    cdef long long[::1] bin_start = bin_start_arr
    cdef unsigned char[::1] gone = gone_arr
    cdef unsigned char[::1] valid = valid_arr
    cdef double[::1] gp = gp_arr
    cdef double[::1] fbuf = f_arr

    cdef double* gpp = &gp[0]
    cdef double* fp = &fbuf[0]

    cdef Py_ssize_t i = 0, idx, j, k
    cdef long long v, u, w2, dv, level = 0, e, cur

    with nogil:
        while i < na:
            v = A[i]
            if valid[v]:
                gone[v] = 1
                dv = d[v]
                core[v] = dv
                level = dv
                for idx in range(ip[v], ip[v + 1]):
                    u = nb[idx]
                    if al[u] == 0 or gone[u] != 0:
                        continue
                    if d[u] == dv and valid[u] == 0:
                        k = 0
                        for j in range(ip[u], ip[u + 1]):
                            w2 = nb[j]
                            if al[w2] != 0 and gone[w2] == 0:
                                gpp[k] = pr[j]
                                k += 1
                        e = _dp_eta_degree(gpp, k, eta, fp)
                        if e < dv:
                            e = dv
                        _move_right(A, pos, bin_start, u, dv, e)
                        d[u] = e
                        valid[u] = 1
                    if d[u] > dv:
                        _move_left(A, pos, bin_start, u, d[u], d[u] - 1)
                        d[u] = d[u] - 1
                        valid[u] = 0
                i += 1
            else:
                k = 0
                for j in range(ip[v], ip[v + 1]):
                    w2 = nb[j]
                    if al[w2] != 0 and gone[w2] == 0:
                        gpp[k] = pr[j]
                        k += 1
                e = _dp_eta_degree(gpp, k, eta, fp)
                if e < level:
                    e = level
                cur = d[v]
                if e > cur:
                    _move_right(A, pos, bin_start, v, cur, e)
                elif e < cur:
                    _move_left(A, pos, bin_start, v, cur, e)
                d[v] = e
                valid[v] = 1
    return core_arr
