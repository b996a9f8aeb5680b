"""Small-dimension oracle checks run by ``gf2pls selftest``.

Every suite compares the packed kernels against dense ``uint8`` numpy
arithmetic, which shares no code with them.  The first mismatch stops the
run and is reported.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Iterator

import numpy as np

from . import instrument
from .bitmat import from_dense, random
from .io import from_ascii, from_bytes, to_ascii, to_bytes
from .m4ri import make_table
from .mul import mul_m4rm, trsm_lower_left_unit, trsm_upper_left_unit
from .perm import Permutation, to_matrix
from .pls import ALGORITHMS, EliminationConfig, decompose, rref


class SelftestFailure(AssertionError):
    pass


def dense_rref(M: np.ndarray) -> tuple[np.ndarray, int]:
    """Textbook RREF of a 0/1 array; returns the reduced copy and the rank."""
    R = (np.asarray(M, dtype=np.uint8) & 1).copy()
    m, n = R.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        hits = np.nonzero(R[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        R[[r, p]] = R[[p, r]]
        rows = np.nonzero(R[:, c])[0]
        rows = rows[rows != r]
        R[rows] ^= R[r]
        r += 1
    return R, r


def dense_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return ((A.astype(np.int64) @ B.astype(np.int64)) & 1).astype(np.uint8)


def _shapes(rng: np.random.Generator, count: int, hi: int) -> Iterator[tuple[int, int, float, int]]:
    edge = [1, 2, 63, 64, 65]
    for i in range(count):
        m = int(rng.choice(edge)) if i % 4 == 0 else int(rng.integers(1, hi + 1))
        n = int(rng.choice(edge)) if i % 3 == 0 else int(rng.integers(1, hi + 1))
        d = float(rng.choice([0.01, 0.1, 0.5, 1.0]))
        yield m, n, d, int(rng.integers(1 << 31))


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise SelftestFailure(msg)


def suite_rref(rng, count=250, hi=96):
    for m, n, d, seed in _shapes(rng, count, hi):
        A = random(m, n, d, seed)
        want, r = dense_rref(A.to_dense())
        for algo in ALGORITHMS:
            B = A.copy()
            got = rref(B, EliminationConfig(algorithm=algo, cutoff_bytes=512))
            _check(got == r and np.array_equal(B.to_dense(), want),
                   f"rref {algo} differs on {m}x{n} density={d} seed={seed}")


def suite_pls(rng, count=150, hi=96):
    for m, n, d, seed in _shapes(rng, count, hi):
        A = random(m, n, d, seed)
        dense = A.to_dense()
        for algo in ("gauss", "mmpf", "pls"):
            res = decompose(A.copy(), EliminationConfig(algorithm=algo, cutoff_bytes=512))
            L, S = res.L().to_dense(), res.S().to_dense()
            P = to_matrix(res.P, m).to_dense()
            _check(np.array_equal(dense_mul(P, dense_mul(L, S)), dense),
                   f"P*L*S != A for {algo} on {m}x{n} density={d} seed={seed}")
            _check(res.is_echelon(), f"{algo} pivots not increasing on {m}x{n} seed={seed}")


def suite_mul(rng, count=150, hi=96):
    for _ in range(count):
        m, l, n = (int(x) for x in rng.integers(1, hi + 1, size=3))
        k = int(rng.integers(1, 7))
        A = random(m, l, 0.5, int(rng.integers(1 << 31)))
        B = random(l, n, 0.5, int(rng.integers(1 << 31)))
        _check(np.array_equal(mul_m4rm(A, B, k).to_dense(), dense_mul(A.to_dense(), B.to_dense())),
               f"mul_m4rm k={k} wrong for {m}x{l} * {l}x{n}")


def suite_trsm(rng, count=60, hi=150):
    for _ in range(count):
        r, n = int(rng.integers(1, hi)), int(rng.integers(1, hi))
        T = random(r, r, 0.5, int(rng.integers(1 << 31))).to_dense()
        B = random(r, n, 0.5, int(rng.integers(1 << 31)))
        for lower in (True, False):
            U = np.tril(T, -1) if lower else np.triu(T, 1)
            np.fill_diagonal(U, 1)
            X = B.copy()
            (trsm_lower_left_unit if lower else trsm_upper_left_unit)(from_dense(U), X)
            _check(np.array_equal(dense_mul(U, X.to_dense()), B.to_dense()),
                   f"trsm ({'lower' if lower else 'upper'}) wrong for {r}x{n}")


def suite_table(rng, count=20):
    for _ in range(count):
        k = int(rng.integers(1, 9))
        A = random(k, k + int(rng.integers(0, 100)), 0.5, int(rng.integers(1 << 31)))
        instrument.reset()
        make_table(A, 0, 0, k)
        adds = int(instrument.stats[instrument.ROW_ADD] + instrument.stats[instrument.TABLE_ADD])
        _check(adds == (1 << k) - 1, f"make_table k={k} used {adds} additions")


def suite_io(rng, count=40, hi=140):
    for m, n, d, seed in _shapes(rng, count, hi):
        A = random(m, n, d, seed)
        B = from_ascii(to_ascii(from_bytes(to_bytes(A))))
        _check(B == A and from_bytes(to_bytes(B)) == A, f"format round trip failed on {m}x{n}")


def suite_perm(rng, count=60, hi=40):
    for _ in range(count):
        n = int(rng.integers(1, hi))
        P = Permutation([int(rng.integers(i, n)) for i in range(n)])
        A = random(n, int(rng.integers(1, hi)), 0.5, int(rng.integers(1 << 31)))
        B = A.copy()
        P.apply_rows(B)
        P.apply_rows_inverse(B)
        _check(B == A, f"apply_rows_inverse does not undo apply_rows for P={P}")


SUITES: dict[str, Callable] = {
    "rref": suite_rref,
    "pls": suite_pls,
    "mul": suite_mul,
    "trsm": suite_trsm,
    "table": suite_table,
    "io": suite_io,
    "perm": suite_perm,
}


def run(seed: int = 2024, out: Callable[[str], None] = print) -> bool:
    """Run every suite; returns ``True`` if all pass."""
    rng = np.random.default_rng(seed)
    for name, suite in SUITES.items():
        t0 = time.perf_counter()
        try:
            suite(rng)
        except SelftestFailure as exc:
            out(f"FAIL {name}: {exc}")
            return False
        out(f"ok   {name} ({time.perf_counter() - t0:.2f}s)")
    return True
