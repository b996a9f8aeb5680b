"""M4RI: reduced row echelon form by Gray-code table elimination.

Each outer step puts a ``k``-row pivot block into reduced form, tabulates
all ``2**k`` combinations of its rows and then clears ``k`` columns of every
other row with a single table-row addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .bitmat import BitMatrix, Region
from .instrument import scratch, stats


def auto_k(m: int, n: int) -> int:
    """Default table bits for an ``m x n`` elimination."""
    d = min(m, n)
    if d < 2:
        return 1
    return max(1, min(8, int(math.log2(d)) - 2))


@dataclass
class GrayTable:
    """Table ``T`` of ``2**k`` row combinations and the id lookup ``L``.

    ``words`` holds only the word span of the tabulated columns: word 0 of
    a table row is word ``col_word`` of the source rows.
    """

    words: np.ndarray
    L: np.ndarray
    k: int
    c_start: int
    ncols: int
    col_word: int

    def as_matrix(self) -> BitMatrix:
        """T as a ``2**k x (ncols - c_start)`` matrix starting at column ``c_start``."""
        width = self.ncols - self.col_word * 64
        full = BitMatrix(1 << self.k, width, np.ascontiguousarray(self.words))
        off = self.c_start - self.col_word * 64
        return full.window(0, off, 1 << self.k, width).copy()


def _table_scratch(A: Region, c: int, k: int, tag: str = "table") -> tuple[np.ndarray, np.ndarray]:
    col = A.c0 + c
    nw = ((A.c0 + A.ncols - 1) >> 6) - (col >> 6) + 1
    return scratch((1 << k, nw), tag=tag), scratch(1 << k, dtype=np.int64, tag=tag)


def _check_block(A: Region, r: int, c: int, k: int) -> None:
    if not 1 <= k <= 16:
        raise ValueError("k must lie in 1..16")
    if r < 0 or r + k > A.nrows or c < 0 or c + k > A.ncols:
        raise ValueError(f"a {k}-row block at ({r}, {c}) does not fit a {A.shape} matrix")


def make_table(A: Region, r_start: int, c_start: int, k: int) -> GrayTable:
    """Tabulate the span of rows ``r_start .. r_start+k-1`` from column ``c_start`` on.

    Table row ``i`` is combination ``i ^ (i >> 1)``; consecutive rows differ
    by one source row, so ``2**k - 1`` additions build it.
    """
    _check_block(A, r_start, c_start, k)
    T, L = _table_scratch(A, c_start, k)
    W, r0, c0, m, n = A.coords()
    _backend.impl.make_table(W, r0, c0, m, n, r_start, c_start, k, T, L, stats)
    return GrayTable(T, L, k, c0 + c_start, c0 + n, (c0 + c_start) >> 6)


def add_rows_from_table(A: Region, r_start: int, r_end: int, c_start: int, k: int,
                        tbl: GrayTable) -> None:
    """For each row in ``[r_start, r_end)`` add the table row its ``k`` leading bits select."""
    if r_end <= r_start:
        return
    if tbl.k != k or tbl.c_start != A.c0 + c_start or tbl.ncols != A.c0 + A.ncols:
        raise ValueError("table was built for a different column range or k")
    if r_start < 0 or r_end > A.nrows:
        raise IndexError("row range outside the matrix")
    W, r0, c0, m, n = A.coords()
    _backend.impl.add_rows_from_table(W, r0, c0, m, n, r_start, r_end, c_start, k,
                                      tbl.words, tbl.L, stats)


def gauss_submatrix(A: Region, r: int, c: int, k: int, r_end: int) -> int:
    """Reduce the block at ``(r, c)`` to a ``kbar x kbar`` identity; returns ``kbar``.

    Pivots for columns ``c .. c+k-1`` are searched in rows up to ``r_end``.
    The search stops at the first column without a pivot.
    """
    if not (0 <= r <= r_end <= A.nrows) or c < 0 or c + k > A.ncols:
        raise ValueError("block outside the matrix")
    W, r0, c0, m, n = A.coords()
    return int(_backend.impl.gauss_submatrix(W, r0, c0, m, n, r, c, k, r_end, stats))


def m4ri_rref(A: Region, k: int = 0, full: bool = True) -> int:
    """Reduce ``A`` in place with M4RI and return the rank.

    With ``full=False`` rows above each pivot block are left alone and the
    result is a row echelon form whose pivot blocks are identities.
    """
    W, r0, c0, m, n = A.coords()
    if m == 0 or n == 0:
        return 0
    k = auto_k(m, n) if k == 0 else k
    if not 1 <= k <= 16:
        raise ValueError("k must lie in 1..16")
    impl = _backend.impl
    nw = ((c0 + n - 1) >> 6) - (c0 >> 6) + 1
    T = scratch((1 << k, nw), tag="table")
    L = scratch(1 << k, dtype=np.int64, tag="table")
    r = c = 0
    while c < n and r < m:
        kk = min(k, n - c)
        kbar = impl.gauss_submatrix(W, r0, c0, m, n, r, c, kk, m, stats)
        if kbar > 0:
            impl.make_table(W, r0, c0, m, n, r, c, kbar, T, L, stats)
            if full:
                impl.add_rows_from_table(W, r0, c0, m, n, 0, r, c, kbar, T, L, stats)
            impl.add_rows_from_table(W, r0, c0, m, n, r + kbar, m, c, kbar, T, L, stats)
        r += kbar
        c += kbar
        if kbar != kk:
            c += 1
    return r
