"""Acceptance criteria, one test each, each printing a single PASS/FAIL line.

Tolerances are exact for every property suite.  The two timing criteria use
the median of 5 repetitions; within a repetition all algorithms run on the
same freshly generated matrix, copied into one shared buffer, in rotating
order, so slow drift of the machine affects them alike.  Set ``CI=1`` to
turn a failure of the density sweep into a warning.

Run standalone with ``python3 tests/test_acceptance.py`` or through pytest;
the lines are also repeated in pytest's terminal summary.
"""

import gc
import os
import statistics
import sys
import tempfile
import time
import warnings

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from gf2pls import instrument, io  # noqa: E402
from gf2pls.bitmat import from_dense, random  # noqa: E402
from gf2pls.gauss import gauss_rref  # noqa: E402
from gf2pls.m4ri import make_table, m4ri_rref  # noqa: E402
from gf2pls.mul import mul_m4rm, mul_naive, trsm_lower_left_unit  # noqa: E402
from gf2pls.perm import Permutation, to_matrix  # noqa: E402
from gf2pls.pls import (ALGORITHMS, EliminationConfig, decompose, hybrid_rref,  # noqa: E402
                        pls_recursive, rank, rref, rref_from_pls)

RESULTS = []
MIN_CUTOFF = 1
PERF_REPS = 5
PLS_VS_M4RI = 1.10
FAST_VS_GAUSS = 3.0
HYBRID_SLACK = 1.25


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def median_times(n, density, runners, reps=PERF_REPS, seed=1):
    """Median wall time per runner; each rep times every runner on the same input."""
    times = {name: [] for name in runners}
    names = list(runners)
    for rep in range(reps):
        base = random(n, n, density, seed + rep)
        work = base.copy()
        order = names[rep % len(names):] + names[:rep % len(names)]
        for name in order:
            # same buffer for every algorithm, so allocation placement cannot favour one
            np.copyto(work.words, base.words)
            gc.collect()
            t0 = time.perf_counter()
            runners[name](work)
            times[name].append(time.perf_counter() - t0)
    return {name: statistics.median(ts) for name, ts in times.items()}


def pls_rref(A):
    res = decompose(A, EliminationConfig(algorithm="pls"))
    rref_from_pls(A, res.rank, res.P, res.Q)


def test_canonical_rref_agreement():
    rng = np.random.default_rng(101)
    special_cols = [63, 64, 65, 127, 129]
    densities = [0.01, 0.1, 0.5, 1.0]
    t0 = time.perf_counter()
    cases = mismatches = 0
    first = ""
    for i in range(520):
        if i % 5 == 0:
            m, n = int(rng.integers(1, 129)), special_cols[(i // 5) % 5]
        elif i % 13 == 1:
            m, n = 1, int(rng.integers(1, 129))
        elif i % 13 == 2:
            m, n = int(rng.integers(1, 129)), 1
        else:
            m, n = (int(x) for x in rng.integers(1, 129, size=2))
        A = random(m, n, densities[i % 4], int(rng.integers(1 << 31)))
        want, r = oracles.rref(A.to_dense())
        for algo in ALGORITHMS:
            B = A.copy()
            cutoff = MIN_CUTOFF if i % 2 else None
            got = rref(B, EliminationConfig(algorithm=algo, cutoff_bytes=cutoff))
            if got != r or not np.array_equal(B.to_dense(), want):
                mismatches += 1
                first = first or f"{algo} on {m}x{n} case {i}"
        cases += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 120
    assert report("canonical RREF agreement", ok,
                  f"{cases} matrices x {len(ALGORITHMS)} algorithms, {mismatches} mismatches"
                  f"{' (first: ' + first + ')' if first else ''}, {elapsed:.1f}s (limit 120s)")


def test_reconstruction():
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    bad = []
    for i in range(300):
        m, n = (int(x) for x in rng.integers(1, 257, size=2))
        A = random(m, n, float(rng.choice([0.01, 0.1, 0.5, 1.0])), int(rng.integers(1 << 31)))
        dense = A.to_dense()
        for algo in ("gauss", "mmpf", "pls"):
            cutoff = MIN_CUTOFF if i % 2 else 4096
            res = decompose(A.copy(), EliminationConfig(algorithm=algo, cutoff_bytes=cutoff))
            r = res.rank
            L, S = res.L().to_dense(), res.S().to_dense()
            q = res.Q.v[:r]
            ok = (L.shape == (m, r) and S.shape == (r, n)
                  and np.array_equal(np.triu(L[:r]), np.eye(r, dtype=np.uint8))
                  and bool(np.all(np.diff(q) > 0))
                  and all(np.nonzero(S[j])[0][0] == q[j] for j in range(r))
                  and np.array_equal(oracles.matmul(to_matrix(res.P, m).to_dense(),
                                                    oracles.matmul(L, S)), dense))
            if not ok:
                bad.append(f"{algo} {m}x{n}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120
    assert report("reconstruction P*L*S = A", ok,
                  f"300 matrices x 3 PLS paths, {len(bad)} failures, {elapsed:.1f}s (limit 120s)")


def test_rank_sensitivity():
    rng = np.random.default_rng(303)
    wrong = []
    checked = 0
    for n in (64, 100, 256):
        for r in (0, 1, n // 4, n // 2, n):
            A = from_dense(oracles.matrix_of_rank(rng, n, r))
            for algo in ALGORITHMS:
                cfg = EliminationConfig(algorithm=algo)
                got = rank(A, cfg)
                B = A.copy()
                got_rref = rref(B, cfg)
                checked += 1
                if got != r or got_rref != r:
                    wrong.append(f"{algo} n={n} r={r} gave {got}/{got_rref}")
    assert report("rank sensitivity", not wrong,
                  f"{checked} (n, r, algorithm) combinations, r in {{0, 1, n/4, n/2, n}}, "
                  f"{len(wrong)} wrong")


def test_multiply_oracle():
    rng = np.random.default_rng(404)
    mul_bad = trsm_bad = 0
    for _ in range(200):
        m, l, n = (int(x) for x in rng.integers(1, 97, size=3))
        k = int(rng.integers(1, 7))
        A = random(m, l, 0.5, int(rng.integers(1 << 31)))
        B = random(l, n, 0.5, int(rng.integers(1 << 31)))
        if mul_m4rm(A, B, k) != mul_naive(A, B):
            mul_bad += 1
    for _ in range(100):
        r, n = int(rng.integers(1, 97)), int(rng.integers(1, 97))
        L = np.tril(oracles.random_dense(rng, r, r), -1)
        np.fill_diagonal(L, 1)
        B = random(r, n, 0.5, int(rng.integers(1 << 31)))
        X = B.copy()
        trsm_lower_left_unit(from_dense(L), X)
        if mul_naive(from_dense(L), X) != B:
            trsm_bad += 1
    assert report("multiply oracle", mul_bad == 0 and trsm_bad == 0,
                  f"mul_m4rm vs mul_naive 200 shapes, k in 1..6: {mul_bad} mismatches; "
                  f"trsm multiply-back 100 systems: {trsm_bad} failures")


def test_cutoff_invariance():
    rng = np.random.default_rng(505)
    cutoffs = (MIN_CUTOFF, 4096, 1 << 30)
    differ = unaligned = 0
    splits = 0
    for i in range(100):
        A = random(512, 512, float(rng.choice([0.01, 0.1, 0.5])), int(rng.integers(1 << 31)))
        outs = []
        for cutoff in cutoffs:
            B = A.copy()
            P, Q = Permutation.identity(512), Permutation.identity(512)
            with instrument.recording(allocations=False):
                r = pls_recursive(B, P, Q, EliminationConfig(cutoff_bytes=cutoff))
                for c0, width, n0 in instrument.splits:
                    splits += 1
                    if width >= 128 and (c0 + n0) % 64:
                        unaligned += 1
            rref_from_pls(B, r, P, Q)
            outs.append((r, B))
        if any(o[0] != outs[0][0] or o[1] != outs[0][1] for o in outs[1:]):
            differ += 1
    ok = differ == 0 and unaligned == 0 and splits > 0
    assert report("cutoff / word-cut invariance", ok,
                  f"100 random 512x512, cutoffs {cutoffs}: {differ} differing (rank, RREF); "
                  f"{splits} recursion splits, {unaligned} not word aligned")


def test_performance_trend():
    n = 8192
    med = median_times(n, 0.5, {"gauss": gauss_rref,
                                "m4ri": lambda A: m4ri_rref(A),
                                "pls": pls_rref})
    ratio = med["pls"] / med["m4ri"]
    g_m4ri, g_pls = med["gauss"] / med["m4ri"], med["gauss"] / med["pls"]
    ok = ratio <= PLS_VS_M4RI and g_m4ri >= FAST_VS_GAUSS and g_pls >= FAST_VS_GAUSS
    assert report("performance trend n=8192", ok,
                  f"median of {PERF_REPS}: gauss {med['gauss']:.3f}s, m4ri {med['m4ri']:.3f}s, "
                  f"pls {med['pls']:.3f}s; pls/m4ri = {ratio:.3f} (<= {PLS_VS_M4RI}), "
                  f"gauss/m4ri = {g_m4ri:.1f}, gauss/pls = {g_pls:.1f} (>= {FAST_VS_GAUSS})")


def test_density_trend():
    n = 4096
    parts = []
    ok = True
    for d in (0.01, 0.05, 0.15, 0.5):
        med = median_times(n, d, {
            "m4ri": lambda A: m4ri_rref(A),
            "pls": pls_rref,
            "hybrid": lambda A: hybrid_rref(A, EliminationConfig(hybrid_threshold=0.15)),
        }, seed=int(d * 1000))
        best = min(med["m4ri"], med["pls"])
        ratio = med["hybrid"] / best
        ok &= ratio <= HYBRID_SLACK
        parts.append(f"d={d}: hybrid {med['hybrid']:.3f}s vs best {best:.3f}s ({ratio:.2f}x)")
    detail = f"median of {PERF_REPS}, limit {HYBRID_SLACK}x; " + "; ".join(parts)
    report("density trend n=4096", ok, detail)
    if not ok and os.environ.get("CI"):
        warnings.warn("density trend failed; timing-sensitive, reported as a warning under CI")
        return
    assert ok


def test_m4ri_table_cost():
    rng = np.random.default_rng(707)
    wrong = []
    for k in range(1, 9):
        for _ in range(5):
            n = int(rng.integers(k, 300))
            A = random(k + 3, n, 0.5, int(rng.integers(1 << 31)))
            instrument.reset()
            make_table(A, int(rng.integers(0, 4)), int(rng.integers(0, n - k + 1)), k)
            adds = int(instrument.stats[instrument.TABLE_ADD] + instrument.stats[instrument.ROW_ADD])
            if adds != (1 << k) - 1:
                wrong.append(f"k={k}: {adds}")
    assert report("M4RI table cost 2^k - 1", not wrong,
                  f"k = 1..8, 5 tables each, {len(wrong)} wrong counts {wrong[:3]}")


def test_file_round_trip():
    rng = np.random.default_rng(909)
    lost = 0
    with tempfile.TemporaryDirectory() as tmp:
        a1, b, a2 = (os.path.join(tmp, x) for x in ("a1", "b", "a2"))
        for i in range(110):
            m = int(rng.integers(0, 60))
            n = int(rng.choice([1, 63, 64, 65, 127, 129, 200])) if i % 2 else int(rng.integers(0, 300))
            A = random(m, n, float(rng.choice([0.01, 0.5, 1.0])), int(rng.integers(1 << 31)))
            io.write_matrix(a1, A, "ascii")
            X, _ = io.read_matrix(a1)
            io.write_matrix(b, X, "bin")
            Y, _ = io.read_matrix(b)
            io.write_matrix(a2, Y, "ascii")
            Z, _ = io.read_matrix(a2)
            with open(a1, "rb") as f1, open(a2, "rb") as f2:
                same_text = f1.read() == f2.read()
            if not (X == A and Y == A and Z == A and same_text):
                lost += 1
    assert report("file-format round trip", lost == 0,
                  f"110 matrices ASCII -> binary -> ASCII through files, {lost} lossy")


CRITERIA = [test_canonical_rref_agreement, test_reconstruction, test_rank_sensitivity,
            test_multiply_oracle, test_cutoff_invariance, test_performance_trend,
            test_density_trend, test_m4ri_table_cost, test_file_round_trip]


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
