"""Cubic reference eliminations and the packed PLS result type.

Packed layout produced by every PLS routine in this package, for an
``m x n`` input of rank ``r``:

* row ``i < r``: columns ``< i`` hold row ``i`` of L, column ``i`` holds 1
  and columns past ``Q[i]`` hold row ``i`` of S (whose leading one sits in
  column ``Q[i]``);
* row ``i >= r``: columns ``< r`` hold row ``i`` of L, the rest is zero.

``A = to_matrix(P) * L * S`` where L is ``m x r`` unit lower triangular and
S is ``r x n`` in row echelon form with pivot columns ``Q[0] < ... < Q[r-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .bitmat import BitMatrix, Region
from .instrument import stats
from .perm import Permutation, to_matrix


def _check_perms(A: Region, P: Permutation, Q: Permutation) -> None:
    if len(P) != A.nrows or len(Q) != A.ncols:
        raise ValueError(f"P and Q must have lengths {A.nrows} and {A.ncols}, "
                         f"got {len(P)} and {len(Q)}")


@dataclass
class PlsResult:
    """Rank, permutations and the packed in-place factors of a PLS decomposition."""

    matrix: Region
    rank: int
    P: Permutation
    Q: Permutation

    @property
    def pivots(self) -> np.ndarray:
        return self.Q.v[:self.rank].copy()

    def L(self) -> BitMatrix:
        """The ``m x r`` unit lower triangular factor."""
        m, r = self.matrix.nrows, self.rank
        out = self.matrix.window(0, 0, m, r).copy()
        W = out.words
        for i in range(r):
            _backend.impl.clear_region(W, i, i, 1, r - i)
        idx = np.arange(r)
        W[idx, idx >> 6] |= np.uint64(1) << (idx & 63).astype(np.uint64)
        return out

    def S(self) -> BitMatrix:
        """The ``r x n`` factor in row echelon form."""
        r, n = self.rank, self.matrix.ncols
        out = self.matrix.window(0, 0, r, n).copy()
        W = out.words
        for i in range(r):
            q = int(self.Q.v[i])
            _backend.impl.clear_region(W, i, 0, 1, q + 1)
            W[i, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        return out

    def reconstruct(self) -> BitMatrix:
        """``to_matrix(P) * L * S``, which equals the original input."""
        from .mul import mul_naive

        LS = mul_naive(self.L(), self.S())
        return mul_naive(to_matrix(self.P, self.matrix.nrows), LS)

    def is_echelon(self) -> bool:
        """Pivot columns strictly increase and every S row starts at its pivot."""
        q = self.Q.v[:self.rank]
        if self.rank and (np.any(np.diff(q) <= 0) or q[0] < 0 or q[-1] >= self.matrix.ncols):
            return False
        return True


def gauss_rref(A: Region) -> int:
    """Reduce ``A`` in place to reduced row echelon form; returns the rank.

    Textbook elimination: for each column find the first row at or below
    the current one with a one, swap it up and clear the column everywhere
    else.
    """
    W, r0, c0, m, n = A.coords()
    return int(_backend.impl.gauss_rref(W, r0, c0, m, n, stats))


def gauss_pls(A: Region, P: Permutation, Q: Permutation) -> int:
    """In-place PLS decomposition by plain Gaussian elimination; returns the rank.

    Pivots are searched column by column and, within a column, top down.
    Rows below a pivot are cleared from the next column on so the
    multipliers stay behind as L.  A final column compression moves L into
    the leading columns.
    """
    _check_perms(A, P, Q)
    W, r0, c0, m, n = A.coords()
    r = int(_backend.impl.gauss_pls(W, r0, c0, m, n, P.v, Q.v, stats))
    _backend.impl.compress_columns(W, r0, c0, m, Q.v, r, stats)
    return r


def gauss_pls_result(A: Region) -> PlsResult:
    P, Q = Permutation.identity(A.nrows), Permutation.identity(A.ncols)
    r = gauss_pls(A, P, Q)
    return PlsResult(A, r, P, Q)
