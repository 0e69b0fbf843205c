# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled census kernel: depth-first enumeration with incremental trace sums.

For a subset S of phase-point operators the kernel keeps
``c2 = sum_{a,b in S} G[a,b]`` and ``c3 = sum_{a,b,c in S} R[a,b,c]`` plus
per-candidate partial sums, so each leaf costs O(1).
"""
from libc.math cimport fabs
from libc.stdlib cimport malloc, free

import numpy as np


cdef struct Ctx:
    int d
    int n
    const double* G
    const double* R
    double scale2
    double scale3
    double window
    int* combo
    double* g
    double* D
    double* V
    int* out
    long long cap
    long long n_out
    long long leaves


cdef void _descend(Ctx* c, int k, double c2, double c3) noexcept nogil:
    # k elements chosen; level-k arrays live at offset k*n
    cdef int n = c.n, d = c.d
    cdef int last = c.combo[k - 1]
    cdef int delta, gam, a, s
    cdef double* g = c.g + k * n
    cdef double* D = c.D + k * n
    cdef double* V = c.V + k * n
    cdef double* g1
    cdef double* D1
    cdef double* V1
    cdef double n2, n3, acc
    cdef long long nn = <long long>n * n
    if k + 1 == d:
        for delta in range(last + 1, n):
            n2 = c2 + 2.0 * g[delta] + c.G[delta * n + delta]
            n3 = c3 + 3.0 * V[delta] + 3.0 * D[delta] + c.R[delta * nn + delta * n + delta]
            c.leaves += 1
            if fabs(n2 * c.scale2 - 1.0) <= c.window and fabs(n3 * c.scale3 - 1.0) <= c.window:
                if c.n_out < c.cap:
                    c.combo[k] = delta
                    for s in range(d):
                        c.out[c.n_out * d + s] = c.combo[s]
                c.n_out += 1
        return
    g1 = c.g + (k + 1) * n
    D1 = c.D + (k + 1) * n
    V1 = c.V + (k + 1) * n
    for delta in range(last + 1, n - (d - k) + 1):
        c.combo[k] = delta
        for gam in range(delta + 1, n):
            g1[gam] = g[gam] + c.G[delta * n + gam]
            D1[gam] = D[gam] + c.R[delta * nn + gam * n + gam]
            acc = 0.0
            for s in range(k):
                a = c.combo[s]
                acc += c.R[a * nn + delta * n + gam]
            V1[gam] = V[gam] + 2.0 * acc + c.R[delta * nn + delta * n + gam]
        _descend(c, k + 1,
                 c2 + 2.0 * g[delta] + c.G[delta * n + delta],
                 c3 + 3.0 * V[delta] + 3.0 * D[delta] + c.R[delta * nn + delta * n + delta])


def scan_chunk(double[:, ::1] G, double[:, :, ::1] R, int d, int first, double window, long long cap=65536):
    """Scan all d-subsets with smallest element ``first``.

    Returns ``(leaves, candidates, overflow)``; candidates is an int array of
    shape (k, d) holding the subsets within ``window`` of both trace targets.
    When more than ``cap`` subsets qualify, ``overflow`` gives the full count
    and only the first ``cap`` are returned.
    """
    cdef int n = G.shape[0]
    cdef Ctx c
    cdef int gam
    cdef long long nn = <long long>n * n
    out = np.empty((cap, d), dtype=np.intc)
    cdef int[:, ::1] out_v = out
    c.d = d
    c.n = n
    c.G = &G[0, 0]
    c.R = &R[0, 0, 0]
    c.scale2 = 1.0 / (<double>d * d)
    c.scale3 = 1.0 / (<double>d * d * d)
    c.window = window
    c.cap = cap
    c.n_out = 0
    c.leaves = 0
    c.out = &out_v[0, 0] if cap > 0 else NULL
    c.combo = <int*>malloc(d * sizeof(int))
    c.g = <double*>malloc((d + 1) * n * sizeof(double))
    c.D = <double*>malloc((d + 1) * n * sizeof(double))
    c.V = <double*>malloc((d + 1) * n * sizeof(double))
    if c.combo == NULL or c.g == NULL or c.D == NULL or c.V == NULL:
        free(c.combo); free(c.g); free(c.D); free(c.V)
        raise MemoryError()
    try:
        if first > n - d:
            return 0, out[:0], 0
        with nogil:
            c.combo[0] = first
            for gam in range(first + 1, n):
                c.g[n + gam] = c.G[first * n + gam]
                c.D[n + gam] = c.R[first * nn + gam * n + gam]
                c.V[n + gam] = c.R[first * nn + first * n + gam]
            if d == 1:
                c.leaves = 1
            else:
                _descend(&c, 1, c.G[first * n + first], c.R[first * nn + first * n + first])
        overflow = c.n_out if c.n_out > cap else 0
        return int(c.leaves), out[:min(c.n_out, cap)].copy(), int(overflow)
    finally:
        free(c.combo); free(c.g); free(c.D); free(c.V)
