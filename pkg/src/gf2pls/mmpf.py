"""MMPF: in-place PLS decomposition with Gray-code tables.

The M4RI outer loop is kept, but the pivot block is only brought to upper
triangular form and the multipliers stay in place as L.  Because of that
the table id of a row no longer equals the table row to add; the lookup
``L`` records the real relationship and every table row is corrected so
that adding it writes the L bits into the eliminated row.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .bitmat import Region
from .gauss import _check_perms
from .instrument import scratch, stats
from .m4ri import GrayTable, _table_scratch, auto_k
from .perm import Permutation


def pls_submatrix(A: Region, s_r: int, s_c: int, k: int, P: Permutation,
                  Q: Permutation) -> tuple[int, int]:
    """Find up to ``k`` pivots at ``(s_r, s_c)``; returns ``(kbar, d_r)``.

    The block becomes upper triangular with L kept below it, rows up to
    ``d_r`` are fully eliminated against the block, and the pivot rows and
    columns are recorded in ``P`` and ``Q``.  ``d_r = s_r - 1`` when no pivot
    was found.
    """
    _check_perms(A, P, Q)
    if not (0 <= s_r < A.nrows and 0 <= s_c and s_c + k <= A.ncols and 1 <= k <= 64):
        raise ValueError("block outside the matrix")
    W, r0, c0, m, n = A.coords()
    kbar, d_r = _backend.impl.pls_submatrix(W, r0, c0, m, n, s_r, s_c, k, P.v, Q.v, stats)
    return int(kbar), int(d_r)


def make_table1(U: Region, r_start: int, c_start: int, k: int) -> GrayTable:
    """Table over the upper triangular rows ``r_start .. r_start+k-1`` of ``U``.

    Row ``t`` contributes only from column ``c_start + t`` on, so entries
    left of the triangle are ignored even if ``U`` still holds them.  The
    lookup is built first; afterwards each table row gets the k bits of its
    Gray id added at ``c_start``, so that a row cleared with it keeps the
    combination it used as L bits.
    """
    if not 1 <= k <= 16 or r_start + k > U.nrows or c_start + k > U.ncols:
        raise ValueError("block outside the matrix")
    T, L = _table_scratch(U, c_start, k)
    W, r0, c0, m, n = U.coords()
    _backend.impl.make_table1(W, r0, c0, m, n, r_start, c_start, k, T, L, stats)
    return GrayTable(T, L, k, c0 + c_start, c0 + n, (c0 + c_start) >> 6)


def mmpf_pls(A: Region, P: Permutation, Q: Permutation, k: int = 0) -> int:
    """In-place PLS decomposition of ``A``; returns the rank.

    ``P`` and ``Q`` are overwritten.  The packed layout is the one described
    in :mod:`gf2pls.gauss` and matches :func:`gauss_pls` bit for bit.
    """
    _check_perms(A, P, Q)
    W, r0, c0, m, n = A.coords()
    return _mmpf(W, r0, c0, m, n, P.v, Q.v, k)


def _mmpf(W, r0, c0, m, n, Pv, Qv, k=0):
    """MMPF on the absolute window ``(r0, c0, m, n)`` writing into index arrays."""
    Pv[:] = np.arange(m)
    Qv[:] = np.arange(n)
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
    while r < m and c < n:
        kk = min(k, n - c)
        kbar, d_r = impl.pls_submatrix(W, r0, c0, m, n, r, c, kk, Pv, Qv, stats)
        if kbar > 0:
            # the pivot rows are read through a triangle mask, no copy of U is made
            impl.make_table1(W, r0, c0, m, n, r, c, kbar, T, L, stats)
            impl.add_rows_from_table(W, r0, c0, m, n, d_r + 1, m, c, kbar, T, L, stats)
            r += kbar
            c += kbar
            if kbar < kk:
                # the search swept every remaining row, so this column is zero below r
                c += 1
        else:
            c += 1
    impl.compress_columns(W, r0, c0, m, Qv, r, stats)
    Qv[r:] = np.arange(r, n)
    Pv[r:] = np.arange(r, m)
    return r
