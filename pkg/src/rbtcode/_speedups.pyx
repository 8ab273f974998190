# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2^m) matrix kernels; see _pykernels for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.string cimport memcpy

cnp.import_array()

ctypedef unsigned short u16


class SingularMatrixError(ValueError):
    pass


cdef inline u16 _mul(u16 a, u16 b, const u16[::1] exp, const u16[::1] log) noexcept nogil:
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


def matmul(a, b, exp, log, int order):
    cdef const u16[:, ::1] A = np.ascontiguousarray(a, dtype=np.uint16)
    cdef const u16[:, ::1] Bm = np.ascontiguousarray(b, dtype=np.uint16)
    cdef const u16[::1] E = np.ascontiguousarray(exp, dtype=np.uint16)
    cdef const u16[::1] L = np.ascontiguousarray(log, dtype=np.uint16)
    cdef Py_ssize_t r = A.shape[0], s = A.shape[1], c = Bm.shape[1]
    if Bm.shape[0] != s:
        raise ValueError("shape mismatch")
    out = np.zeros((r, c), dtype=np.uint16)
    cdef u16[:, ::1] O = out
    cdef Py_ssize_t i, l, j
    cdef u16 av, bv
    cdef unsigned int la
    with nogil:
        for i in range(r):
            for l in range(s):
                av = A[i, l]
                if av == 0:
                    continue
                la = L[av]
                for j in range(c):
                    bv = Bm[l, j]
                    if bv != 0:
                        O[i, j] ^= E[la + L[bv]]
    return out


cdef Py_ssize_t _reduce(u16[:, ::1] W, Py_ssize_t ncols_pivot, bint full,
                        const u16[::1] E, const u16[::1] L, int order) noexcept nogil:
    # Row-reduce W in place over the first ncols_pivot columns. Returns rank;
    # with full=True clears above pivots too (Gauss-Jordan).
    cdef Py_ssize_t nrows = W.shape[0], width = W.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef u16 tmp, f, s
    cdef unsigned int lf
    for c in range(ncols_pivot):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if W[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(width):
                tmp = W[r, j]
                W[r, j] = W[piv, j]
                W[piv, j] = tmp
        s = E[(order - 1) - L[W[r, c]]]
        if s != 1:
            for j in range(c, width):
                W[r, j] = _mul(W[r, j], s, E, L)
        for i in range(0 if full else r + 1, nrows):
            if i == r:
                continue
            f = W[i, c]
            if f == 0:
                continue
            lf = L[f]
            for j in range(c, width):
                if W[r, j] != 0:
                    W[i, j] ^= E[lf + L[W[r, j]]]
        r += 1
    return r


def rank(m, exp, log, int order):
    work = np.array(m, dtype=np.uint16, copy=True, order="C")
    if work.ndim != 2:
        raise ValueError("rank expects a 2-D array")
    cdef u16[:, ::1] W = work
    cdef const u16[::1] E = np.ascontiguousarray(exp, dtype=np.uint16)
    cdef const u16[::1] L = np.ascontiguousarray(log, dtype=np.uint16)
    cdef Py_ssize_t result
    with nogil:
        result = _reduce(W, W.shape[1], False, E, L, order)
    return int(result)


def inverse(m, exp, log, int order):
    a = np.asarray(m, dtype=np.uint16)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("inverse expects a square matrix")
    cdef Py_ssize_t n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.uint16)], axis=1)
    cdef u16[:, ::1] W = aug
    cdef const u16[::1] E = np.ascontiguousarray(exp, dtype=np.uint16)
    cdef const u16[::1] L = np.ascontiguousarray(log, dtype=np.uint16)
    cdef Py_ssize_t r
    with nogil:
        r = _reduce(W, n, True, E, L, order)
    if r < n:
        raise SingularMatrixError(f"matrix is singular (rank {r} < {n})")
    return aug[:, n:].copy()
