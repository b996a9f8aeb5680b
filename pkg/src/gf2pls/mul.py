"""Multiplication and unit-triangular solves over GF(2).

All routines accept matrices or windows.  ``addmul`` is the workhorse the
recursive decomposition reduces to; the triangular solves split the system
in halves and push the off-diagonal block through ``addmul``.
"""

from __future__ import annotations

import math

from . import _backend
from .bitmat import BitMatrix, Region, overlaps, words_for
from .instrument import scratch, stats

TRSM_BASE = 128
# compiled M4RM: tables filled per pass and their width in words
M4RM_TABLES = 8
M4RM_BLOCK_WORDS = 64


def auto_k(common: int) -> int:
    """Table bits for a multiply whose inner dimension is ``common``."""
    if common < 2:
        return 1
    return max(1, min(8, int(math.log2(common)) - 2))


def tuned_k(m: int, common: int) -> int:
    """Table bits for ``addmul`` that also weigh the number of output rows.

    A stripe of ``k`` columns costs about ``2**k`` table additions plus ``m``
    row additions, so ``(2**k + m) / k`` is minimised, capped by :func:`auto_k`.
    """
    cap = auto_k(common)
    return min(range(1, cap + 1), key=lambda k: ((1 << k) + m) / k)


def _aligned_operand(B: Region, offset: int) -> Region:
    """``B`` itself if its columns start at bit ``offset``, else an aligned copy."""
    if (B.c0 & 63) == offset:
        return B
    tmp = BitMatrix(B.nrows, offset + B.ncols,
                    scratch((B.nrows, words_for(offset + B.ncols)), tag="mul"))
    view = tmp.window(0, offset, B.nrows, offset + B.ncols)
    view.assign(B)
    return view


def addmul(C: Region, A: Region, B: Region, k: int = 0, method: str = "m4rm") -> None:
    """``C += A * B`` in place.

    ``C`` may not share entries with ``A`` or ``B``.  ``method`` is
    ``"m4rm"`` (Gray-code tables of ``2**k`` row combinations of ``B``) or
    ``"naive"`` (one row XOR per set bit of ``A``).  ``k = 0`` picks the
    table size with :func:`tuned_k`.
    """
    m, l = A.shape
    if B.nrows != l or C.shape != (m, B.ncols):
        raise ValueError(f"cannot add {A.shape} x {B.shape} into {C.shape}")
    if overlaps(C, A) or overlaps(C, B):
        raise ValueError("addmul output aliases an input")
    n = B.ncols
    if m == 0 or n == 0 or l == 0:
        return
    B = _aligned_operand(B, C.c0 & 63)
    Cw, cr0, cc0 = C.parent.words, C.r0, C.c0
    Aw, ar0, ac0 = A.parent.words, A.r0, A.c0
    Bw, br0, bc0 = B.parent.words, B.r0, B.c0
    if method == "naive":
        _backend.impl.mul_add_naive(Cw, cr0, cc0, Aw, ar0, ac0, Bw, br0, bc0, m, l, n, stats)
    elif method == "m4rm":
        k = tuned_k(m, l) if k == 0 else k
        if not 1 <= k <= 8:
            raise ValueError("k must lie in 1..8")
        nw = ((bc0 + n - 1) >> 6) - (bc0 >> 6) + 1
        T = scratch((M4RM_TABLES << k, min(nw, M4RM_BLOCK_WORDS)), tag="mul")
        _backend.impl.mul_add_m4rm(Cw, cr0, cc0, Aw, ar0, ac0, Bw, br0, bc0,
                                   m, l, n, k, T, stats)
    else:
        raise ValueError(f"unknown method {method!r}")


def _product(A: Region, B: Region, k: int, method: str) -> BitMatrix:
    if A.ncols != B.nrows:
        raise ValueError(f"dimension mismatch: {A.shape} x {B.shape}")
    C = BitMatrix(A.nrows, B.ncols)
    addmul(C, A, B, k=k, method=method)
    return C


def mul_naive(A: Region, B: Region) -> BitMatrix:
    """Reference product: XOR row ``l`` of ``B`` into row ``i`` for every ``A[i, l] = 1``."""
    return _product(A, B, 0, "naive")


def mul_m4rm(A: Region, B: Region, k: int = 0) -> BitMatrix:
    """Method of the Four Russians product; ``k = 0`` uses :func:`auto_k` of the inner dimension."""
    return _product(A, B, k or auto_k(A.ncols), "m4rm")


def _split(r: int) -> int:
    h = r // 2
    return (h // 64) * 64 if h >= 64 else h


def _check_trsm(T: Region, B: Region) -> int:
    r = T.nrows
    if T.ncols != r:
        raise ValueError("triangular factor must be square")
    if B.nrows != r:
        raise ValueError(f"right-hand side has {B.nrows} rows, expected {r}")
    if overlaps(T, B):
        raise ValueError("triangular factor aliases the right-hand side")
    return r


def trsm_lower_left_unit(L: Region, B: Region) -> None:
    """Overwrite ``B`` with ``X`` solving ``L X = B``.

    Only the strictly lower part of ``L`` is read; the diagonal counts as
    ones and whatever sits above it is ignored.
    """
    r = _check_trsm(L, B)
    if r <= 1 or B.ncols == 0:
        return
    if r <= TRSM_BASE:
        _backend.impl.trsm_lower_unit(L.parent.words, L.r0, L.c0, B.parent.words,
                                      B.r0, B.c0, r, B.ncols, stats)
        return
    h = _split(r)
    n = B.ncols
    B0, B1 = B.window(0, 0, h, n), B.window(h, 0, r, n)
    trsm_lower_left_unit(L.window(0, 0, h, h), B0)
    addmul(B1, L.window(h, 0, r, h), B0)
    trsm_lower_left_unit(L.window(h, h, r, r), B1)


def trsm_upper_left_unit(U: Region, B: Region) -> None:
    """Overwrite ``B`` with ``X`` solving ``U X = B``; only the strict upper part of ``U`` is read."""
    r = _check_trsm(U, B)
    if r <= 1 or B.ncols == 0:
        return
    if r <= TRSM_BASE:
        _backend.impl.trsm_upper_unit(U.parent.words, U.r0, U.c0, B.parent.words,
                                      B.r0, B.c0, r, B.ncols, stats)
        return
    h = _split(r)
    n = B.ncols
    B0, B1 = B.window(0, 0, h, n), B.window(h, 0, r, n)
    trsm_upper_left_unit(U.window(h, h, r, r), B1)
    addmul(B0, U.window(0, h, h, r), B1)
    trsm_upper_left_unit(U.window(0, 0, h, h), B0)
