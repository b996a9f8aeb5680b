"""Bit-packed dense matrices over GF(2).

A :class:`BitMatrix` stores row ``i`` in ``words[i]``, a run of ``stride``
64-bit words.  Column ``j`` lives in word ``j // 64`` at bit ``j % 64``, so
the least significant bit is the lowest column.  Bits past ``ncols`` are
always zero.

A :class:`MatrixWindow` is a rectangular view that aliases its parent's
storage; all recursive algorithms work on windows so they stay in place.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .instrument import stats

WORD = 64
_DEFAULT_SAMPLE = 64


def words_for(ncols: int) -> int:
    return (ncols + WORD - 1) // WORD


def _check_index(name, value, bound):
    if not 0 <= value < bound:
        raise IndexError(f"{name} {value} out of range [0, {bound})")


class _Region:
    """Shared behaviour of matrices and windows.

    Subclasses provide ``parent``, ``r0``, ``c0``, ``nrows`` and ``ncols``;
    every method works in coordinates local to the region.
    """

    parent: "BitMatrix"
    r0: int
    c0: int
    nrows: int
    ncols: int

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def words(self) -> np.ndarray:
        return self.parent.words

    def coords(self):
        """``(words, r0, c0, m, n)`` in absolute parent coordinates."""
        return self.parent.words, self.r0, self.c0, self.nrows, self.ncols

    def get(self, i: int, j: int) -> int:
        _check_index("row", i, self.nrows)
        _check_index("column", j, self.ncols)
        col = self.c0 + j
        return int(self.parent.words[self.r0 + i, col >> 6] >> np.uint64(col & 63)) & 1

    def set(self, i: int, j: int, v: int) -> None:
        _check_index("row", i, self.nrows)
        _check_index("column", j, self.ncols)
        col = self.c0 + j
        bit = np.uint64(1 << (col & 63))
        row = self.parent.words[self.r0 + i]
        if v & 1:
            row[col >> 6] |= bit
        else:
            row[col >> 6] &= ~bit

    def row_add(self, dst: int, src: int, start_col: int = 0) -> None:
        """``row[dst] ^= row[src]`` on columns ``start_col`` and later."""
        _check_index("row", dst, self.nrows)
        _check_index("row", src, self.nrows)
        if not 0 <= start_col <= self.ncols:
            raise IndexError(f"start_col {start_col} out of range")
        _backend.impl.xor_rows(self.parent.words, self.r0 + dst, self.r0 + src,
                               self.c0 + start_col, self.c0 + self.ncols, stats)

    def row_swap(self, i: int, j: int) -> None:
        _check_index("row", i, self.nrows)
        _check_index("row", j, self.nrows)
        _backend.impl.swap_rows(self.parent.words, self.r0 + i, self.r0 + j,
                                self.c0, self.c0 + self.ncols, stats)

    def col_swap(self, a: int, b: int, start_row: int = 0) -> None:
        """Exchange columns ``a`` and ``b`` on rows ``start_row`` and later."""
        _check_index("column", a, self.ncols)
        _check_index("column", b, self.ncols)
        if not 0 <= start_row <= self.nrows:
            raise IndexError(f"start_row {start_row} out of range")
        _backend.impl.col_swap(self.parent.words, self.c0 + a, self.c0 + b,
                               self.r0 + start_row, self.r0 + self.nrows, stats)

    def read_bits(self, i: int, c: int, k: int) -> int:
        """The ``k`` bits at ``(i, c..c+k)`` as an integer, column ``c`` most significant."""
        _check_index("row", i, self.nrows)
        if not 1 <= k <= 64 or c < 0 or c + k > self.ncols:
            raise IndexError(f"cannot read {k} bits at column {c} of {self.ncols}")
        return int(_backend.impl.read_bits(self.parent.words, self.r0 + i, self.c0 + c, k))

    def window(self, r_start: int, c_start: int, r_end: int, c_end: int) -> "MatrixWindow":
        """A view of rows ``[r_start, r_end)`` and columns ``[c_start, c_end)``."""
        if not (0 <= r_start <= r_end <= self.nrows and 0 <= c_start <= c_end <= self.ncols):
            raise ValueError(
                f"invalid window rows [{r_start},{r_end}) cols [{c_start},{c_end}) "
                f"of a {self.nrows}x{self.ncols} region")
        return MatrixWindow(self.parent, self.r0 + r_start, self.c0 + c_start,
                            self.r0 + r_end, self.c0 + c_end)

    def density(self, sample_rows: int = _DEFAULT_SAMPLE) -> float:
        """Fraction of ones, exact or estimated on evenly spaced sampled rows."""
        if sample_rows < 1:
            raise ValueError("sample_rows must be >= 1")
        m, n = self.nrows, self.ncols
        if m == 0 or n == 0:
            return 0.0
        s = min(sample_rows, m)
        rows = (np.arange(s, dtype=np.int64) * m) // s
        ones = _backend.impl.popcount_rows(self.parent.words, self.r0, self.c0, n, rows)
        return ones / (s * n)

    def _aligned_rows(self, offset: int = 0) -> np.ndarray:
        """Copy of the region's rows shifted so column 0 lands at bit ``offset``."""
        W = self.parent.words
        m, n = self.nrows, self.ncols
        nw = words_for(offset + n)
        w0, b = self.c0 >> 6, self.c0 & 63
        need = words_for(b + n) + 1
        src = np.zeros((m, need), dtype=np.uint64)
        avail = min(need, W.shape[1] - w0)
        src[:, :avail] = W[self.r0:self.r0 + m, w0:w0 + avail]
        nw0 = words_for(n)
        if b:
            out = (src[:, :nw0] >> np.uint64(b)) | (src[:, 1:nw0 + 1] << np.uint64(64 - b))
        else:
            out = src[:, :nw0].copy()
        if nw0 and n & 63:
            out[:, -1] &= np.uint64((1 << (n & 63)) - 1)
        if offset:
            shifted = np.zeros((m, nw), dtype=np.uint64)
            shifted[:, :nw0] = out << np.uint64(offset)
            shifted[:, 1:] |= (out >> np.uint64(64 - offset))[:, :nw - 1]
            return shifted
        return out

    def copy(self) -> "BitMatrix":
        """A fresh matrix holding the region's entries."""
        out = BitMatrix(self.nrows, self.ncols)
        if self.nrows and self.ncols:
            out.words[:, :] = self._aligned_rows()
        return out

    extract = copy

    def assign(self, src: "_Region") -> None:
        """Overwrite the region with the entries of ``src`` (same shape)."""
        if src.shape != self.shape:
            raise ValueError(f"shape mismatch {src.shape} vs {self.shape}")
        m, n = self.shape
        if m == 0 or n == 0:
            return
        b = self.c0 & 63
        data = src._aligned_rows(b)
        w0 = self.c0 >> 6
        nw = data.shape[1]
        mask = np.full(nw, np.uint64(0xFFFFFFFFFFFFFFFF))
        mask[0] &= np.uint64((0xFFFFFFFFFFFFFFFF << b) & 0xFFFFFFFFFFFFFFFF)
        end = (b + n) & 63
        if end:
            mask[-1] &= np.uint64((1 << end) - 1)
        block = self.parent.words[self.r0:self.r0 + m, w0:w0 + nw]
        block[:] = (block & ~mask) | (data & mask)

    def to_dense(self) -> np.ndarray:
        """The entries as an ``(nrows, ncols)`` uint8 array of 0/1."""
        m, n = self.shape
        if m == 0 or n == 0:
            return np.zeros((m, n), dtype=np.uint8)
        rows = self._aligned_rows().astype("<u8")
        bits = np.unpackbits(rows.view(np.uint8), axis=1, bitorder="little")
        return bits[:, :n]

    def is_zero(self) -> bool:
        m, n = self.shape
        if m == 0 or n == 0:
            return True
        return not self._aligned_rows().any()

    def __str__(self):
        return "\n".join("".join(map(str, row)) for row in self.to_dense())

    def __eq__(self, other):
        if not isinstance(other, _Region):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return bool(np.array_equal(self._aligned_rows(), other._aligned_rows()))

    __hash__ = None


class BitMatrix(_Region):
    """Row-major, 64-bit word packed matrix over GF(2)."""

    __slots__ = ("nrows", "ncols", "words")

    def __init__(self, nrows: int, ncols: int, words: np.ndarray | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("dimensions must be non-negative")
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        stride = words_for(self.ncols)
        if words is None:
            try:
                words = np.zeros((self.nrows, stride), dtype=np.uint64)
            except MemoryError as exc:
                raise MemoryError(f"cannot allocate a {nrows}x{ncols} bit matrix") from exc
        elif words.dtype != np.uint64 or words.ndim != 2 or words.shape[0] != nrows \
                or words.shape[1] < stride or not words.flags.c_contiguous:
            raise ValueError("words must be a C-contiguous uint64 array of shape (nrows, >=stride)")
        self.words = words

    parent = property(lambda self: self)
    r0 = 0
    c0 = 0

    @property
    def stride(self) -> int:
        return self.words.shape[1]

    def __repr__(self):
        return f"BitMatrix({self.nrows}x{self.ncols})"

    def randomize(self, density: float, seed: int) -> None:
        """Refill with i.i.d. bits, one SplitMix64 draw per entry in row-major order.

        Entry ``(i, j)`` is 1 when the top 53 bits of draw ``i*ncols + j`` are
        below ``floor(density * 2**53)``.  The stream starts at ``seed``.
        """
        if not 0.0 <= density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        threshold = int(np.floor(density * float(1 << 53)))
        _backend.impl.randomize(self.words, self.nrows, self.ncols, threshold,
                                int(seed) & 0xFFFFFFFFFFFFFFFF)

    def padding_ok(self) -> bool:
        """True when every bit past ``ncols`` is zero."""
        if self.nrows == 0:
            return True
        full = self.ncols // 64
        if self.ncols & 63:
            tail = self.words[:, full] >> np.uint64(self.ncols & 63)
            if tail.any():
                return False
            full += 1
        return not self.words[:, full:].any()


class MatrixWindow(_Region):
    """View of the rectangle ``[r_start, r_end) x [c_start, c_end)`` of a parent."""

    __slots__ = ("parent", "r0", "c0", "nrows", "ncols")

    def __init__(self, parent: BitMatrix, r_start: int, c_start: int, r_end: int, c_end: int):
        if not (0 <= r_start <= r_end <= parent.nrows and 0 <= c_start <= c_end <= parent.ncols):
            raise ValueError("window bounds outside parent")
        self.parent = parent
        self.r0 = r_start
        self.c0 = c_start
        self.nrows = r_end - r_start
        self.ncols = c_end - c_start

    @property
    def r_start(self):
        return self.r0

    @property
    def c_start(self):
        return self.c0

    @property
    def r_end(self):
        return self.r0 + self.nrows

    @property
    def c_end(self):
        return self.c0 + self.ncols

    def __repr__(self):
        return (f"MatrixWindow(rows {self.r_start}:{self.r_end}, "
                f"cols {self.c_start}:{self.c_end} of {self.parent!r})")


Region = _Region


def new(nrows: int, ncols: int) -> BitMatrix:
    return BitMatrix(nrows, ncols)


def identity(n: int) -> BitMatrix:
    A = BitMatrix(n, n)
    idx = np.arange(n)
    A.words[idx, idx >> 6] = np.uint64(1) << (idx & 63).astype(np.uint64)
    return A


def from_dense(rows) -> BitMatrix:
    """Pack a 2-D array-like of 0/1 values."""
    arr = np.asarray(rows, dtype=np.uint8)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D array")
    m, n = arr.shape
    A = BitMatrix(m, n)
    if m and n:
        padded = np.zeros((m, A.stride * 64), dtype=np.uint8)
        padded[:, :n] = arr & 1
        A.words[:, :] = np.packbits(padded, axis=1, bitorder="little").view("<u8")
    return A


def from_rows(rows) -> BitMatrix:
    """Build from strings such as ``"101"`` or from nested lists."""
    rows = list(rows)
    if rows and isinstance(rows[0], str):
        rows = [[int(ch) for ch in r] for r in rows]
    if not rows:
        return BitMatrix(0, 0)
    return from_dense(rows)


def random(nrows: int, ncols: int, density: float = 0.5, seed: int = 0) -> BitMatrix:
    A = BitMatrix(nrows, ncols)
    A.randomize(density, seed)
    return A


def get(A: Region, i: int, j: int) -> int:
    return A.get(i, j)


def set(A: Region, i: int, j: int, v: int) -> None:  # noqa: A001 - mirrors the operation name
    A.set(i, j, v)


def row_add(A: Region, dst: int, src: int, start_col: int = 0) -> None:
    A.row_add(dst, src, start_col)


def row_swap(A: Region, i: int, j: int) -> None:
    A.row_swap(i, j)


def col_swap(A: Region, a: int, b: int, start_row: int = 0) -> None:
    A.col_swap(a, b, start_row)


def read_bits(A: Region, i: int, c: int, k: int) -> int:
    return A.read_bits(i, c, k)


def window(A: Region, r_start: int, c_start: int, r_end: int, c_end: int) -> MatrixWindow:
    return A.window(r_start, c_start, r_end, c_end)


def density(A: Region, sample_rows: int = _DEFAULT_SAMPLE) -> float:
    return A.density(sample_rows)


def randomize(A: BitMatrix, density: float, seed: int) -> None:
    A.randomize(density, seed)


def overlaps(X: Region, Y: Region) -> bool:
    """True when two regions share at least one entry of the same parent."""
    if X.parent is not Y.parent:
        return False
    return (X.r0 < Y.r0 + Y.nrows and Y.r0 < X.r0 + X.nrows
            and X.c0 < Y.c0 + Y.ncols and Y.c0 < X.c0 + X.ncols)
