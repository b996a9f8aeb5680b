"""Matrix and permutation files.

Binary layout (little endian throughout)::

    b"BMF2"  version:u8 = 1  nrows:u64  ncols:u64  words:u64[nrows * ceil(ncols/64)]

Words are row-major with the lowest column in the least significant bit and
zero padding.  The ASCII layout is a ``"<nrows> <ncols>"`` line followed by
one line of ``0``/``1`` characters per row.  Readers detect the format from
the magic bytes.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .bitmat import BitMatrix, Region, words_for
from .perm import Permutation

MAGIC = b"BMF2"
VERSION = 1
_HEADER = struct.Struct("<4sBQQ")
_MAX_DIM = 1 << 40


class MatrixFormatError(ValueError):
    """Raised for malformed or truncated matrix and permutation files."""


def to_bytes(A: Region) -> bytes:
    m, n = A.shape
    data = A.copy().words.astype("<u8", copy=False)
    return _HEADER.pack(MAGIC, VERSION, m, n) + data.tobytes()


def from_bytes(data: bytes) -> BitMatrix:
    if len(data) < _HEADER.size:
        raise MatrixFormatError("file too short for a BMF2 header")
    magic, version, m, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MatrixFormatError("missing BMF2 magic")
    if version != VERSION:
        raise MatrixFormatError(f"unsupported BMF2 version {version}")
    if m > _MAX_DIM or n > _MAX_DIM:
        raise MatrixFormatError(f"dimensions {m}x{n} overflow")
    stride = words_for(n)
    expected = _HEADER.size + 8 * m * stride
    if len(data) != expected:
        raise MatrixFormatError(f"payload has {len(data) - _HEADER.size} bytes, "
                                f"expected {expected - _HEADER.size}")
    words = np.frombuffer(data, dtype="<u8", offset=_HEADER.size).astype(np.uint64)
    A = BitMatrix(m, n, np.ascontiguousarray(words.reshape(m, stride)))
    if not A.padding_ok():
        raise MatrixFormatError("nonzero padding bits")
    return A


def to_ascii(A: Region) -> str:
    m, n = A.shape
    lines = [f"{m} {n}"]
    if m:
        chars = (A.to_dense() + ord("0")).astype(np.uint8)
        lines.extend(row.tobytes().decode("ascii") for row in chars)
    return "\n".join(lines) + "\n"


def from_ascii(text: str) -> BitMatrix:
    lines = text.splitlines()
    if not lines:
        raise MatrixFormatError("empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise MatrixFormatError("first line must be '<nrows> <ncols>'")
    try:
        m, n = int(head[0]), int(head[1])
    except ValueError as exc:
        raise MatrixFormatError("non-integer dimensions") from exc
    if m < 0 or n < 0 or m > _MAX_DIM or n > _MAX_DIM:
        raise MatrixFormatError(f"invalid dimensions {m}x{n}")
    body = lines[1:1 + m]
    if len(body) != m or any(line.strip() for line in lines[1 + m:]):
        raise MatrixFormatError(f"expected exactly {m} rows")
    if m == 0:
        return BitMatrix(0, n)
    raw = "".join(body)
    if any(len(line) != n for line in body):
        raise MatrixFormatError(f"every row must have exactly {n} characters")
    chars = np.frombuffer(raw.encode("ascii", errors="replace"), dtype=np.uint8)
    bits = chars - ord("0")
    if bits.size and bits.max() > 1:
        raise MatrixFormatError("rows may only contain '0' and '1'")
    from .bitmat import from_dense

    A = from_dense(bits.reshape(m, n)) if n else BitMatrix(m, 0)
    return A


def write_matrix(path: str | os.PathLike, A: Region, fmt: str = "bin") -> None:
    if fmt == "bin":
        with open(path, "wb") as fh:
            fh.write(to_bytes(A))
    elif fmt == "ascii":
        with open(path, "w", encoding="ascii") as fh:
            fh.write(to_ascii(A))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def detect_format(data: bytes) -> str:
    return "bin" if data[:4] == MAGIC else "ascii"


def read_matrix(path: str | os.PathLike) -> tuple[BitMatrix, str]:
    """Load a matrix and report which format it was stored in."""
    with open(path, "rb") as fh:
        data = fh.read()
    fmt = detect_format(data)
    if fmt == "bin":
        return from_bytes(data), fmt
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise MatrixFormatError("neither BMF2 nor ASCII") from exc
    return from_ascii(text), fmt


def write_permutation(path: str | os.PathLike, P: Permutation) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(str(P) + "\n")


def read_permutation(path: str | os.PathLike) -> Permutation:
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    try:
        P = Permutation([int(tok) for tok in text.split()])
    except ValueError as exc:
        raise MatrixFormatError("permutation entries must be integers") from exc
    if not P.is_valid():
        raise MatrixFormatError("not a transposition vector")
    return P
