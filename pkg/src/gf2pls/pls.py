"""Recursive block PLS decomposition, RREF from PLS and the density hybrid.

The recursion splits the columns near the middle on a word boundary,
decomposes the left half, pushes the Schur complement through a triangular
solve and one multiplication, and decomposes the lower right block.  Small
windows go to MMPF.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

import numpy as np

from . import _backend
from .bitmat import BitMatrix, Region, words_for
from .gauss import PlsResult, _check_perms, gauss_pls, gauss_rref
from .instrument import record_event, record_split, scratch, stats
from .m4ri import auto_k, m4ri_rref
from .mmpf import _mmpf, mmpf_pls
from .mul import addmul, trsm_lower_left_unit, trsm_upper_left_unit
from .perm import Permutation

log = logging.getLogger(__name__)

ALGORITHMS = ("gauss", "m4ri", "mmpf", "pls", "hybrid")
FOUR_MIB = 4 << 20


def detect_l2_bytes() -> int | None:
    """L2 size from ``F2_L2_BYTES``, the OS, or ``None`` if unknown."""
    env = os.environ.get("F2_L2_BYTES")
    if env:
        try:
            value = int(env)
        except ValueError:
            log.warning("ignoring malformed F2_L2_BYTES=%r", env)
        else:
            if value > 0:
                return value
    try:
        value = os.sysconf("SC_LEVEL2_CACHE_SIZE")
        if value > 0:
            return int(value)
    except (ValueError, OSError, AttributeError):
        pass
    base = "/sys/devices/system/cpu/cpu0/cache"
    try:
        for entry in sorted(os.listdir(base)):
            with open(os.path.join(base, entry, "level")) as fh:
                if fh.read().strip() != "2":
                    continue
            with open(os.path.join(base, entry, "size")) as fh:
                text = fh.read().strip().upper()
            mult = {"K": 1 << 10, "M": 1 << 20, "G": 1 << 30}.get(text[-1:], 1)
            return int(text.rstrip("KMG")) * mult
    except (OSError, ValueError):
        pass
    return None


def default_cutoff_bytes() -> int:
    """Crossover to the base case: the smaller of 4 MiB and the L2 cache."""
    l2 = detect_l2_bytes()
    return FOUR_MIB if l2 is None else min(FOUR_MIB, l2)


@dataclass
class EliminationConfig:
    """Knobs shared by all eliminations.

    ``k`` is the table size (0 picks one from the dimensions),
    ``cutoff_bytes`` the window size at which the recursion hands over to
    MMPF, ``hybrid_threshold`` the trailing density at which the hybrid
    switches from M4RI to PLS.
    """

    k: int = 0
    cutoff_bytes: int | None = None
    hybrid_threshold: float = 0.15
    algorithm: str = "pls"

    def __post_init__(self):
        if self.cutoff_bytes is None:
            self.cutoff_bytes = default_cutoff_bytes()
        if self.cutoff_bytes <= 0:
            raise ValueError("cutoff_bytes must be positive")
        if not 0.0 <= self.hybrid_threshold <= 1.0:
            raise ValueError("hybrid_threshold must lie in [0, 1]")
        if not 0 <= self.k <= 16:
            raise ValueError("k must lie in 0..16")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")


HYBRID_THRESHOLDS = (0.15, 0.20)


def _split_point(c0: int, n: int) -> int:
    """Relative column near ``n/2`` whose absolute index is a multiple of 64."""
    target = c0 + n // 2
    lo = ((c0 >> 6) + 1) << 6
    hi = ((c0 + n - 1) >> 6) << 6
    if lo > hi:
        return n // 2
    cut = min(max(((target + 32) >> 6) << 6, lo), hi)
    return cut - c0


def _fits(m: int, c0: int, n: int, cutoff: int) -> bool:
    nw = ((c0 + n - 1) >> 6) - (c0 >> 6) + 1
    return m * nw * 8 <= cutoff


def _pls(A: Region, Pv: np.ndarray, Qv: np.ndarray, cfg: EliminationConfig) -> int:
    W, ar0, ac0, m, n = A.coords()
    if m == 0 or n == 0:
        Pv[:] = np.arange(m)
        Qv[:] = np.arange(n)
        return 0
    if n == 1 or _fits(m, ac0, n, cfg.cutoff_bytes):
        return _mmpf(W, ar0, ac0, m, n, Pv, Qv, cfg.k)
    impl = _backend.impl
    n0 = _split_point(ac0, n)
    record_split(ac0, n, n0)

    r0 = _pls(A.window(0, 0, m, n0), Pv, Qv[:n0], cfg)
    if r0 > 0:
        impl.apply_rows(W, ar0, ac0 + n0, n - n0, Pv, r0, False, stats)
        A_NE = A.window(0, n0, r0, n)
        trsm_lower_left_unit(A.window(0, 0, r0, r0), A_NE)
        if r0 < m:
            addmul(A.window(r0, n0, m, n), A.window(r0, 0, m, r0), A_NE)

    P1, Q1 = Pv[r0:], Qv[n0:]
    r1 = _pls(A.window(r0, n0, m, n), P1, Q1, cfg)
    if r1 > 0 and r0 > 0:
        impl.apply_rows(W, ar0 + r0, ac0, r0, P1, r1, False, stats)
    P1 += r0
    Q1 += n0
    # pivots of the second block follow those of the first
    Qv[r0:r0 + r1] = Qv[n0:n0 + r1].copy()
    for t in range(r1):
        impl.col_swap(W, ac0 + r0 + t, ac0 + n0 + t, ar0 + r0 + t, ar0 + m, stats)
    Qv[r0 + r1:] = np.arange(r0 + r1, n)
    return r0 + r1


def pls_recursive(A: Region, P: Permutation, Q: Permutation,
                  cfg: EliminationConfig | None = None) -> int:
    """In-place PLS decomposition by column recursion; returns the rank.

    Produces the same packed layout, ``P`` and ``Q`` as :func:`mmpf_pls`.
    Extra memory beyond the index vectors is the multiplication scratch
    and the base-case table.
    """
    cfg = cfg or EliminationConfig()
    _check_perms(A, P, Q)
    return _pls(A, P.v, Q.v, cfg)


def _validate(A: Region, rank: int, Q: Permutation) -> None:
    m, n = A.shape
    if not 0 <= rank <= min(m, n) or len(Q) != n:
        raise ValueError(f"rank {rank} or Q of length {len(Q)} inconsistent with {A.shape}")
    q = Q.v[:rank]
    if rank and (np.any(q < np.arange(rank)) or q[-1] >= n or np.any(np.diff(q) <= 0)):
        raise ValueError("Q does not describe strictly increasing pivot columns")


def rref_from_pls(A: Region, rank: int, P: Permutation, Q: Permutation) -> None:
    """Turn a packed PLS result into the reduced row echelon form of the original matrix.

    L is discarded, the column compression is made uniform over all rows,
    the unit upper triangular pivot block is inverted onto the remaining
    columns and the pivots are moved back to their original columns.
    ``P`` is not needed since the row echelon form does not depend on it.
    """
    _validate(A, rank, Q)
    W, r0, c0, m, n = A.coords()
    impl = _backend.impl
    r = rank
    impl.clear_lower(W, r0, c0, m, n, r)
    q = Q.v
    for j in range(r):
        if q[j] != j:
            impl.col_swap(W, c0 + j, c0 + int(q[j]), r0, r0 + j, stats)
    if r > 1 and n > r:
        trsm_upper_left_unit(A.window(0, 0, r, r), A.window(0, r, r, n))
    impl.set_identity(W, r0, c0, r)
    for j in range(r - 1, -1, -1):
        if q[j] != j:
            impl.col_swap(W, c0 + j, c0 + int(q[j]), r0, r0 + r, stats)


def _pivot_bits(A: Region, rows: int, cols: np.ndarray) -> BitMatrix:
    """``rows x len(cols)`` matrix of the entries of A's top rows in the given columns."""
    G = BitMatrix(rows, len(cols), scratch((rows, words_for(len(cols))), tag="hybrid"))
    abs_cols = np.ascontiguousarray(A.c0 + cols, dtype=np.int64)
    _backend.impl.gather_columns(A.parent.words, A.r0, rows, abs_cols, G.words)
    return G


def hybrid_rref(A: Region, cfg: EliminationConfig | None = None) -> int:
    """RREF that starts with M4RI and hands the rest to PLS once it gets dense.

    Before every M4RI step the density of the untouched lower right window
    is estimated on 64 rows; at or above ``cfg.hybrid_threshold`` that
    window is finished with :func:`pls_recursive` and :func:`rref_from_pls`
    and the rows above are reduced against the new pivots with one
    multiplication.
    """
    cfg = cfg or EliminationConfig(algorithm="hybrid")
    W, r0, c0, m, n = A.coords()
    if m == 0 or n == 0:
        return 0
    k = auto_k(m, n) if cfg.k == 0 else cfg.k
    impl = _backend.impl
    nw = ((c0 + n - 1) >> 6) - (c0 >> 6) + 1
    T = scratch((1 << k, nw), tag="table")
    L = scratch(1 << k, dtype=np.int64, tag="table")
    r = c = 0
    while c < n and r < m:
        trailing = A.window(r, c, m, n)
        dens = trailing.density(64)
        if dens >= cfg.hybrid_threshold:
            log.info("hybrid switch to PLS at row %d, column %d (density %.4f)", r, c, dens)
            record_event("hybrid_switch", row=r, col=c, density=dens)
            P2, Q2 = Permutation.identity(m - r), Permutation.identity(n - c)
            r2 = _pls(trailing, P2.v, Q2.v, cfg)
            rref_from_pls(trailing, r2, P2, Q2)
            if r > 0 and r2 > 0:
                G = _pivot_bits(A.window(0, c, r, n), r, Q2.v[:r2])
                addmul(A.window(0, c, r, n), G, A.window(r, c, r + r2, n))
            return r + r2
        kk = min(k, n - c)
        kbar = impl.gauss_submatrix(W, r0, c0, m, n, r, c, kk, m, stats)
        if kbar > 0:
            impl.make_table(W, r0, c0, m, n, r, c, kbar, T, L, stats)
            impl.add_rows_from_table(W, r0, c0, m, n, 0, r, c, kbar, T, L, stats)
            impl.add_rows_from_table(W, r0, c0, m, n, r + kbar, m, c, kbar, T, L, stats)
        r += kbar
        c += kbar
        if kbar != kk:
            c += 1
    record_event("hybrid_switch", row=None, col=None, density=None)
    return r


def decompose(A: Region, cfg: EliminationConfig | None = None) -> PlsResult:
    """In-place PLS decomposition with the configured algorithm.

    ``gauss`` and ``mmpf`` run directly; ``pls`` and ``hybrid`` use the
    recursive decomposition.  M4RI computes no L and is rejected.
    """
    cfg = cfg or EliminationConfig()
    P, Q = Permutation.identity(A.nrows), Permutation.identity(A.ncols)
    if cfg.algorithm == "gauss":
        r = gauss_pls(A, P, Q)
    elif cfg.algorithm == "mmpf":
        r = mmpf_pls(A, P, Q, cfg.k)
    elif cfg.algorithm in ("pls", "hybrid"):
        r = pls_recursive(A, P, Q, cfg)
    else:
        raise ValueError(f"{cfg.algorithm} does not produce a PLS decomposition")
    return PlsResult(A, r, P, Q)


def rref(A: Region, cfg: EliminationConfig | None = None) -> int:
    """Reduce ``A`` in place to reduced row echelon form; returns the rank."""
    cfg = cfg or EliminationConfig()
    algo = cfg.algorithm
    if algo == "gauss":
        return gauss_rref(A)
    if algo == "m4ri":
        return m4ri_rref(A, cfg.k)
    if algo == "hybrid":
        return hybrid_rref(A, cfg)
    res = decompose(A, cfg)
    rref_from_pls(A, res.rank, res.P, res.Q)
    return res.rank


def rank(A: Region, cfg: EliminationConfig | None = None) -> int:
    """Rank of ``A`` computed on a working copy with the configured algorithm."""
    cfg = cfg or EliminationConfig()
    work = A.copy()
    if cfg.algorithm == "m4ri":
        return m4ri_rref(work, cfg.k, full=False)
    if cfg.algorithm == "hybrid":
        return hybrid_rref(work, cfg)
    return decompose(work, cfg).rank
