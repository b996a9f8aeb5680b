"""Reference arithmetic that shares no code with the package.

Rows are Python ints with bit ``j`` holding column ``j``.
"""

import numpy as np


def to_ints(dense):
    out = []
    for row in np.asarray(dense, dtype=np.uint8):
        v = 0
        for j in np.nonzero(row)[0]:
            v |= 1 << int(j)
        out.append(v)
    return out


def from_ints(rows, ncols):
    out = np.zeros((len(rows), ncols), dtype=np.uint8)
    for i, v in enumerate(rows):
        for j in range(ncols):
            out[i, j] = (v >> j) & 1
    return out


def rref(dense):
    """Reduced row echelon form and rank by textbook elimination on ints."""
    dense = np.asarray(dense, dtype=np.uint8)
    m, n = dense.shape
    rows = to_ints(dense)
    r = 0
    for c in range(n):
        bit = 1 << c
        p = next((i for i in range(r, m) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(m):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        r += 1
    return from_ints(rows, n), r


def rank(dense):
    """Rank from an XOR basis keyed by the highest set bit."""
    basis = {}
    for v in to_ints(dense):
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def matmul(A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    return ((A @ B) & 1).astype(np.uint8)


def random_dense(rng, m, n, density=0.5):
    return (rng.random((m, n)) < density).astype(np.uint8)


def matrix_of_rank(rng, n, r, ncols=None):
    """``n x ncols`` matrix whose rows are random combinations of ``r`` independent rows."""
    ncols = n if ncols is None else ncols
    if r == 0:
        return np.zeros((n, ncols), dtype=np.uint8)
    while True:
        basis = random_dense(rng, r, ncols)
        if rank(basis) == r:
            break
    while True:
        coef = random_dense(rng, n, r)
        if rank(coef) == r:
            return matmul(coef, basis)


def is_rref(dense):
    """Structural RREF check: increasing pivots, unit pivot columns, zero rows last."""
    dense = np.asarray(dense, dtype=np.uint8)
    last = -1
    seen_zero = False
    for i, row in enumerate(dense):
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            seen_zero = True
            continue
        if seen_zero or nz[0] <= last:
            return False
        last = nz[0]
        if dense[:, last].sum() != 1:
            return False
    return True
