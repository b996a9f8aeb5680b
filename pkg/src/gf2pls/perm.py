"""Row and column permutations stored as transposition vectors.

Applying ``P`` means: for ``i = 0 .. len-1`` in order, swap positions ``i``
and ``P[i]``.  This is the order in which an elimination performs its row
swaps.  The decompositions therefore satisfy ``A = to_matrix(P) * L * S``:
``to_matrix(P)`` is the matrix of the *inverse* application, which undoes
the swaps the elimination made.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import _backend
from .bitmat import BitMatrix, Region
from .instrument import stats


class Permutation:
    """Transposition vector ``v`` with ``i <= v[i] < len``."""

    __slots__ = ("v",)

    def __init__(self, v: Iterable[int] | np.ndarray):
        self.v = np.ascontiguousarray(np.asarray(v, dtype=np.int64).reshape(-1))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n, dtype=np.int64))

    def __len__(self):
        return int(self.v.shape[0])

    def __getitem__(self, i):
        return self.v[i]

    def __setitem__(self, i, value):
        self.v[i] = value

    def __eq__(self, other):
        if isinstance(other, Permutation):
            return bool(np.array_equal(self.v, other.v))
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Permutation({self.v.tolist()})"

    def copy(self) -> "Permutation":
        return Permutation(self.v.copy())

    def is_valid(self) -> bool:
        n = len(self)
        idx = np.arange(n)
        return bool(np.all(self.v >= idx) and np.all(self.v < n))

    def one_line(self) -> np.ndarray:
        """``perm`` with ``apply_rows(P, X)[i] == X[perm[i]]``."""
        perm = np.arange(len(self))
        for i, p in enumerate(self.v.tolist()):
            perm[i], perm[p] = perm[p], perm[i]
        return perm

    def apply_rows(self, A: Region) -> None:
        apply_rows(self, A)

    def apply_rows_inverse(self, A: Region) -> None:
        apply_rows_inverse(self, A)

    def to_matrix(self, n: int | None = None) -> BitMatrix:
        return to_matrix(self, n)

    def to_matrix_inverse(self, n: int | None = None) -> BitMatrix:
        return to_matrix_inverse(self, n)

    def __str__(self):
        return " ".join(map(str, self.v.tolist()))


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def _apply(P: Permutation, A: Region, inverse: bool) -> None:
    if len(P) > A.nrows:
        raise ValueError(f"permutation of length {len(P)} exceeds {A.nrows} rows")
    W, r0, c0, m, n = A.coords()
    _backend.impl.apply_rows(W, r0, c0, n, P.v, len(P), inverse, stats)


def apply_rows(P: Permutation, A: Region) -> None:
    """Swap rows ``i`` and ``P[i]`` for ascending ``i``."""
    _apply(P, A, False)


def apply_rows_inverse(P: Permutation, A: Region) -> None:
    """Undo :func:`apply_rows` by performing the swaps in descending order."""
    _apply(P, A, True)


def compress_columns(A: Region, r: int, Q: Permutation) -> None:
    """For ``j < r`` ascending, swap columns ``j`` and ``Q[j]`` from row ``j`` down.

    After a decomposition this moves the L factor into columns ``0..r-1``.
    """
    if r > min(A.nrows, len(Q)):
        raise ValueError("rank exceeds the matrix or Q")
    if np.any(Q.v[:r] >= A.ncols):
        raise ValueError("Q refers to a column outside the matrix")
    W, r0, c0, m, n = A.coords()
    _backend.impl.compress_columns(W, r0, c0, m, Q.v, r, stats)


def _materialize(P: Permutation, n: int | None, inverse: bool) -> BitMatrix:
    n = len(P) if n is None else n
    if n < len(P):
        raise ValueError("n must be at least len(P)")
    perm = np.arange(n)
    perm[:len(P)] = P.one_line()
    M = BitMatrix(n, n)
    if inverse:
        # row i of apply_rows(P, X) is row perm[i] of X
        rows, cols = np.arange(n), perm
    else:
        rows, cols = perm, np.arange(n)
    M.words[rows, cols >> 6] |= np.uint64(1) << (cols & 63).astype(np.uint64)
    return M


def to_matrix(P: Permutation, n: int | None = None) -> BitMatrix:
    """Matrix ``M`` with ``M * X == apply_rows_inverse(P, X)``.

    This is the ``P`` of ``A = P L S``: the elimination applied ``P`` to
    the rows of ``A`` and the product has to undo it.
    """
    return _materialize(P, n, False)


def to_matrix_inverse(P: Permutation, n: int | None = None) -> BitMatrix:
    """Matrix ``M`` with ``M * X == apply_rows(P, X)``; the inverse of :func:`to_matrix`."""
    return _materialize(P, n, True)
