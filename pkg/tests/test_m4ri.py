import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from gf2pls import instrument
from gf2pls.bitmat import BitMatrix, from_dense, from_rows, identity, random
from gf2pls.gauss import gauss_rref
from gf2pls.m4ri import add_rows_from_table, auto_k, gauss_submatrix, m4ri_rref, make_table

# first eight columns of the worked M4RI example: three reduced pivot rows,
# the table indexed by the binary value of its first three bits, and two
# rows whose prefix [1 1 0] selects table entry 6
WORKED_PIVOTS = ["10010111", "01011110", "00100111"]
WORKED_TABLE = ["00000000", "00100111", "01011110", "01111001",
                "10010111", "10110000", "11001001", "11101110"]
WORKED_ROWS = ["11001011", "11011101"]


def span(rows):
    out = {0}
    for v in oracles.to_ints(rows):
        out |= {x ^ v for x in out}
    return out


def pivot_block(rng, k, n):
    """``k x n`` rows with a ``k x k`` identity in front, as after reduction."""
    rows = oracles.random_dense(rng, k, n)
    rows[:, :k] = np.eye(k, dtype=np.uint8)
    return rows


class TestMakeTable:
    def test_single_row(self):
        tbl = make_table(from_rows(["110"]), 0, 0, 1)
        assert tbl.as_matrix().to_dense().tolist() == [[0, 0, 0], [1, 1, 0]]
        assert tbl.L.tolist() == [0, 1]

    def test_worked_table(self):
        tbl = make_table(from_rows(WORKED_PIVOTS), 0, 0, 3)
        T = tbl.as_matrix().to_dense()
        for ident, row in enumerate(WORKED_TABLE):
            assert "".join(map(str, T[tbl.L[ident]])) == row
        assert "".join(map(str, T[tbl.L[6]]))[:3] == "110"

    def test_worked_rows_cleared(self):
        A = from_rows(WORKED_PIVOTS + WORKED_ROWS)
        tbl = make_table(A, 0, 0, 3)
        add_rows_from_table(A, 3, 5, 0, 3, tbl)
        got = ["".join(map(str, r)) for r in A.to_dense()[3:]]
        table6 = int(WORKED_TABLE[6], 2)
        assert got == [format(int(r, 2) ^ table6, "08b") for r in WORKED_ROWS]
        assert all(r.startswith("000") for r in got)

    def test_two_rows_span(self):
        T = make_table(from_rows(["10", "01"]), 0, 0, 2).as_matrix().to_dense()
        assert sorted(map(tuple, T.tolist())) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    @pytest.mark.parametrize("k", range(1, 9))
    def test_cost_is_2k_minus_1(self, k, backend):
        A = random(k + 5, 300, 0.5, k)
        instrument.reset()
        make_table(A, 2, 13, k)
        assert instrument.stats[instrument.TABLE_ADD] == (1 << k) - 1
        assert instrument.stats[instrument.ROW_ADD] == 0

    @given(st.integers(1, 6), st.integers(0, 150), st.integers(0, 70), st.integers(0, 2**31))
    def test_span_and_indexing(self, k, extra, c_start, seed):
        rng = np.random.default_rng(seed)
        n = c_start + k + extra
        A = from_dense(np.zeros((k, n), dtype=np.uint8))
        A.window(0, c_start, k, n).assign(from_dense(pivot_block(rng, k, k + extra)))
        tbl = make_table(A, 0, c_start, k)
        T = tbl.as_matrix()
        dense = T.to_dense()
        assert not dense[0].any()
        assert set(oracles.to_ints(dense)) == span(A.to_dense()[:, c_start:])
        assert len(set(oracles.to_ints(dense))) == 1 << k
        for ident in range(1 << k):
            assert T.read_bits(int(tbl.L[ident]), 0, k) == ident


class TestAddRowsFromTable:
    def test_zero_prefix_untouched(self):
        A = from_rows(["1011", "0111", "0010"])
        tbl = make_table(A, 0, 0, 2)
        add_rows_from_table(A, 2, 3, 0, 2, tbl)
        assert A.to_dense()[2].tolist() == [0, 0, 1, 0]

    def test_empty_range(self):
        A = random(6, 10, 0.5, 1)
        gauss_submatrix(A, 0, 0, 2, 6)
        before = A.copy()
        add_rows_from_table(A, 4, 4, 0, 2, make_table(A, 0, 0, 2))
        assert A == before

    def test_clears_k_columns(self, rng):
        for _ in range(30):
            k = int(rng.integers(1, 7))
            n = int(rng.integers(k, 200))
            piv = pivot_block(rng, k, n)
            rest = oracles.random_dense(rng, 20, n)
            A = from_dense(np.vstack([piv, rest]))
            add_rows_from_table(A, k, k + 20, 0, k, make_table(A, 0, 0, k))
            out = A.to_dense()
            assert not out[k:, :k].any()
            # each row changed by an element of the pivot span
            diffs = oracles.to_ints(out[k:] ^ rest)
            assert set(diffs) <= span(piv)

    def test_mismatched_table(self):
        A = random(8, 20, 0.5, 2)
        tbl = make_table(A, 0, 0, 2)
        with pytest.raises(ValueError):
            add_rows_from_table(A, 2, 8, 1, 2, tbl)


class TestGaussSubmatrix:
    def test_full_block(self):
        A = from_rows(["10", "11"])
        assert gauss_submatrix(A, 0, 0, 2, 2) == 2
        assert A == identity(2)

    def test_zero(self):
        assert gauss_submatrix(BitMatrix(4, 4), 0, 0, 3, 4) == 0

    def test_stops_at_first_missing_pivot(self):
        A = from_rows(["01", "01"])
        assert gauss_submatrix(A, 0, 0, 2, 2) == 0

    def test_block_is_identity(self, rng):
        for _ in range(40):
            A = random(30, 90, 0.5, int(rng.integers(1 << 31)))
            kbar = gauss_submatrix(A, 3, 5, 6, 30)
            block = A.to_dense()[3:3 + kbar, 5:5 + kbar]
            assert np.array_equal(block, np.eye(kbar, dtype=np.uint8))


class TestM4riRref:
    def test_identity(self):
        A = identity(70)
        assert m4ri_rref(A) == 70 and A == identity(70)

    def test_matches_gauss_100(self, rng, backend):
        for _ in range(100):
            A = random(50, 70, float(rng.choice([0.05, 0.5])), int(rng.integers(1 << 31)))
            B = A.copy()
            assert m4ri_rref(A) == gauss_rref(B)
            assert A == B

    def test_duplicate_rows(self):
        d = random(10, 30, 0.5, 5).to_dense()
        d[7] = d[2]
        A = from_dense(d)
        want, r = oracles.rref(d)
        assert m4ri_rref(A) == r
        assert np.array_equal(A.to_dense(), want)

    def test_independent_of_k(self, rng):
        for _ in range(15):
            m, n = (int(x) for x in rng.integers(1, 130, size=2))
            A = random(m, n, float(rng.choice([0.02, 0.5])), int(rng.integers(1 << 31)))
            want, r = oracles.rref(A.to_dense())
            for k in range(1, 9):
                B = A.copy()
                assert m4ri_rref(B, k) == r
                assert np.array_equal(B.to_dense(), want)

    def test_echelon_only(self, rng):
        for _ in range(20):
            A = random(60, 80, 0.3, int(rng.integers(1 << 31)))
            want, r = oracles.rref(A.to_dense())
            B = A.copy()
            assert m4ri_rref(B, 4, full=False) == r
            out = B.to_dense()
            assert not out[r:].any()
            leads = [int(np.nonzero(row)[0][0]) for row in out[:r]]
            assert leads == [int(np.nonzero(row)[0][0]) for row in want[:r]]

    def test_auto_k(self):
        assert auto_k(1, 100) == 1
        assert auto_k(64, 64) == 4
        assert auto_k(1 << 14, 1 << 14) == 8
