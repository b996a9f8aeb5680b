import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from gf2pls import mul
from gf2pls.bitmat import BitMatrix, from_dense, from_rows, identity, random
from gf2pls.mul import addmul, mul_m4rm, mul_naive, trsm_lower_left_unit, trsm_upper_left_unit

dims = st.integers(1, 48)


def unit_triangular(rng, r, lower=True, junk=True):
    """Unit triangular dense matrix; ``junk`` fills the ignored half with noise."""
    T = oracles.random_dense(rng, r, r)
    tri = np.tril(T, -1) if lower else np.triu(T, 1)
    np.fill_diagonal(tri, 1)
    stored = tri.copy()
    if junk:
        mask = np.triu(np.ones((r, r), bool), 1) if lower else np.tril(np.ones((r, r), bool), -1)
        stored[mask] = oracles.random_dense(rng, r, r)[mask]
        np.fill_diagonal(stored, rng.integers(0, 2, size=r).astype(np.uint8))
    return tri, stored


class TestNaive:
    def test_identity(self):
        A = random(9, 70, 0.5, 1)
        assert mul_naive(identity(9), A) == A

    def test_zero(self):
        assert mul_naive(random(5, 6, 0.5, 2), BitMatrix(6, 7)).is_zero()

    def test_example(self):
        C = mul_naive(from_rows(["11", "01"]), from_rows(["10", "11"]))
        assert C.to_dense().tolist() == [[0, 1], [1, 1]]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mul_naive(BitMatrix(2, 3), BitMatrix(2, 3))

    def test_against_integer_matmul(self, rng):
        for _ in range(30):
            m, l, n = (int(x) for x in rng.integers(1, 140, size=3))
            A, B = oracles.random_dense(rng, m, l), oracles.random_dense(rng, l, n)
            assert np.array_equal(mul_naive(from_dense(A), from_dense(B)).to_dense(),
                                  oracles.matmul(A, B))


class TestM4RM:
    def test_equals_naive_all_k(self, rng, backend):
        for _ in range(50):
            m, l, n = (int(x) for x in rng.integers(1, 97, size=3))
            A = random(m, l, 0.5, int(rng.integers(1 << 31)))
            B = random(l, n, 0.5, int(rng.integers(1 << 31)))
            want = mul_naive(A, B)
            for k in range(1, 7):
                assert mul_m4rm(A, B, k) == want, (m, l, n, k)

    def test_identity_every_k(self):
        B = random(20, 130, 0.5, 3)
        for k in range(1, 9):
            assert mul_m4rm(identity(20), B, k) == B

    def test_one_by_one(self):
        assert mul_m4rm(from_rows(["1"]), from_rows(["1"])).to_dense().tolist() == [[1]]

    def test_auto_k(self):
        assert mul.auto_k(1) == 1
        assert mul.auto_k(64) == 4
        assert mul.auto_k(1 << 20) == 8

    def test_bad_k(self):
        with pytest.raises(ValueError):
            mul_m4rm(identity(3), identity(3), 9)

    @given(dims, dims, dims, dims, st.integers(0, 2**31))
    def test_associative(self, a, b, c, d, seed):
        A, B, C = random(a, b, 0.5, seed), random(b, c, 0.5, seed + 1), random(c, d, 0.5, seed + 2)
        assert mul_m4rm(mul_m4rm(A, B), C) == mul_m4rm(A, mul_m4rm(B, C))


class TestAddmul:
    def test_zero_c_is_product(self):
        A, B = random(30, 40, 0.5, 4), random(40, 50, 0.5, 5)
        C = BitMatrix(30, 50)
        addmul(C, A, B)
        assert C == mul_naive(A, B)

    def test_twice_restores(self):
        A, B, C = random(30, 40, 0.5, 4), random(40, 50, 0.5, 5), random(30, 50, 0.5, 6)
        orig = C.copy()
        addmul(C, A, B)
        addmul(C, A, B)
        assert C == orig

    def test_aliasing_rejected(self):
        M = random(64, 64, 0.5, 7)
        with pytest.raises(ValueError):
            addmul(M.window(0, 0, 32, 32), M.window(0, 0, 32, 32), M.window(32, 32, 64, 64))

    def test_windows_match_copy_out(self, rng, backend):
        for _ in range(60):
            M = random(120, 300, 0.5, int(rng.integers(1 << 31)))
            m, l, n = (int(x) for x in rng.integers(1, 40, size=3))
            # C, A, B in disjoint row bands of one parent with unaligned columns
            cc, ac, bc = (int(x) for x in rng.integers(0, 300 - max(l, n), size=3))
            C = M.window(0, cc, m, cc + n)
            A = M.window(40, ac, 40 + m, ac + l)
            B = M.window(80, bc, 80 + l, bc + n)
            want = M.to_dense()
            want[0:m, cc:cc + n] ^= oracles.matmul(A.to_dense(), B.to_dense())
            method = "naive" if rng.random() < 0.3 else "m4rm"
            addmul(C, A, B, k=int(rng.integers(0, 9)), method=method)
            assert np.array_equal(M.to_dense(), want)
            assert M.padding_ok()


class TestTrsm:
    def test_identity(self):
        B = random(10, 90, 0.5, 1)
        X = B.copy()
        trsm_lower_left_unit(identity(10), X)
        assert X == B

    def test_example(self):
        X = from_rows(["1", "0"])
        trsm_lower_left_unit(from_rows(["10", "11"]), X)
        assert X.to_dense().tolist() == [[1], [1]]

    def test_ignores_upper_storage(self):
        X = from_rows(["1", "0"])
        trsm_lower_left_unit(from_rows(["01", "10"]), X)
        assert X.to_dense().tolist() == [[1], [1]]

    @pytest.mark.parametrize("lower", [True, False])
    def test_multiply_back_100(self, rng, lower, backend):
        solve = trsm_lower_left_unit if lower else trsm_upper_left_unit
        for case in range(100):
            r = int(rng.integers(1, 33)) if case < 50 else int(rng.integers(33, 300))
            n = int(rng.integers(1, 200))
            tri, stored = unit_triangular(rng, r, lower)
            B = random(r, n, 0.5, int(rng.integers(1 << 31)))
            X = B.copy()
            solve(from_dense(stored), X)
            assert np.array_equal(oracles.matmul(tri, X.to_dense()), B.to_dense())

    def test_unaligned_windows(self, rng):
        for _ in range(30):
            r = int(rng.integers(1, 150))
            M = random(2 * r + 1, 400, 0.5, int(rng.integers(1 << 31)))
            lc, bc = int(rng.integers(0, 400 - r)), int(rng.integers(0, 200))
            L = M.window(0, lc, r, lc + r)
            B = M.window(r + 1, bc, 2 * r + 1, 400)
            tri = np.tril(L.to_dense(), -1)
            np.fill_diagonal(tri, 1)
            b = B.to_dense()
            trsm_lower_left_unit(L, B)
            assert np.array_equal(oracles.matmul(tri, B.to_dense()), b)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            trsm_lower_left_unit(identity(3), BitMatrix(4, 2))
