"""numpy implementations of the GF(2^m) matrix kernels.

Same signatures and results as the compiled ``_speedups`` module. All arrays
are ``uint16``; ``exp`` has length ``2 * (q - 1)`` so that a product can be
looked up as ``exp[log[a] + log[b]]`` without a modulo.
"""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ValueError):
    pass


def _outer_mul(col, row, exp, log):
    out = exp[log[col][:, None].astype(np.intp) + log[row][None, :]]
    out[(col == 0)[:, None] | (row == 0)[None, :]] = 0
    return out


def matmul(a, b, exp, log, order):
    a = np.ascontiguousarray(a, dtype=np.uint16)
    b = np.ascontiguousarray(b, dtype=np.uint16)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint16)
    for l in range(a.shape[1]):
        col = a[:, l]
        if not col.any():
            continue
        out ^= _outer_mul(col, b[l], exp, log)
    return out


def _scale_row(row, s, exp, log, order):
    if s == 1:
        return row
    out = exp[log[row].astype(np.intp) + int(log[s])]
    out[row == 0] = 0
    return out


def _inverse_of(x, exp, log, order):
    return exp[(order - 1) - int(log[x])]


def rank(m, exp, log, order):
    work = np.array(m, dtype=np.uint16, copy=True)
    if work.ndim != 2:
        raise ValueError("rank expects a 2-D array")
    nrows, ncols = work.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        work[r] = _scale_row(work[r], _inverse_of(work[r, c], exp, log, order), exp, log, order)
        below = work[r + 1:, c]
        if below.any():
            work[r + 1:] ^= _outer_mul(below, work[r], exp, log)
        r += 1
    return r


def inverse(m, exp, log, order):
    a = np.array(m, dtype=np.uint16, copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("inverse expects a square matrix")
    aug = np.concatenate([a, np.eye(n, dtype=np.uint16)], axis=1)
    for c in range(n):
        nz = np.flatnonzero(aug[c:, c])
        if nz.size == 0:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {c})")
        piv = c + int(nz[0])
        if piv != c:
            aug[[c, piv]] = aug[[piv, c]]
        aug[c] = _scale_row(aug[c], _inverse_of(aug[c, c], exp, log, order), exp, log, order)
        col = aug[:, c].copy()
        col[c] = 0
        if col.any():
            aug ^= _outer_mul(col, aug[c], exp, log)
    return aug[:, n:].copy()
