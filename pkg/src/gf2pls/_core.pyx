# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels over bit-packed GF(2) matrices.

Every function here mirrors one in :mod:`gf2pls._pycore` with the same
signature and the same observable result (including the instrumentation
counters).  Matrices are passed as C-contiguous ``uint64`` arrays of shape
``(nrows, stride)``; windows are given as absolute ``(r0, c0, m, n)``.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.string cimport memset, memcpy

import numpy as np

ctypedef uint64_t u64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

# counter slots, kept in sync with gf2pls.instrument
cdef enum:
    ROW_ADD = 0
    TABLE_ADD = 1
    ROW_SWAP = 2
    COL_SWAP = 3

cdef u64 ONES = 0xFFFFFFFFFFFFFFFFULL
cdef unsigned char REV8[256]

cdef void _init_rev8():
    cdef int i, j, v
    for i in range(256):
        v = 0
        for j in range(8):
            if i & (1 << j):
                v |= 1 << (7 - j)
        REV8[i] = v

_init_rev8()

BACKEND = "compiled"


# ---------------------------------------------------------------------------
# word helpers

cdef inline u64 first_mask(Py_ssize_t col) nogil:
    return ONES << (col & 63)


cdef inline u64 last_mask(Py_ssize_t end) nogil:
    return ONES >> ((64 - (end & 63)) & 63)


cdef inline int getbit(const u64* row, Py_ssize_t col) nogil:
    return <int>((row[col >> 6] >> (col & 63)) & 1)


cdef inline u64 rev_bits(u64 v, int k) nogil:
    cdef u64 out = 0
    cdef int i
    if k <= 8:
        return REV8[v] >> (8 - k)
    for i in range(8):
        out = (out << 8) | REV8[(v >> (8 * i)) & 0xFF]
    return out >> (64 - k)


cdef inline u64 read_be(const u64* row, Py_ssize_t c, int k) nogil:
    cdef Py_ssize_t w = c >> 6
    cdef int b = c & 63
    cdef u64 v = row[w] >> b
    if b + k > 64:
        v |= row[w + 1] << (64 - b)
    if k < 64:
        v &= (<u64>1 << k) - 1
    return rev_bits(v, k)


cdef inline void xor_cols(u64* d, const u64* s, Py_ssize_t lo, Py_ssize_t hi) nogil:
    # d, s share column coordinates
    cdef Py_ssize_t w0, w1, w
    if hi <= lo:
        return
    w0 = lo >> 6
    w1 = (hi - 1) >> 6
    if w0 == w1:
        d[w0] ^= s[w0] & first_mask(lo) & last_mask(hi)
        return
    d[w0] ^= s[w0] & first_mask(lo)
    for w in range(w0 + 1, w1):
        d[w] ^= s[w]
    d[w1] ^= s[w1] & last_mask(hi)


cdef inline void xor_span(u64* d, const u64* s, Py_ssize_t nw, u64 m0, u64 m1) nogil:
    # m0 already includes m1 when nw == 1
    cdef Py_ssize_t w
    if nw == 1:
        d[0] ^= s[0] & m0
        return
    d[0] ^= s[0] & m0
    for w in range(1, nw - 1):
        d[w] ^= s[w]
    d[nw - 1] ^= s[nw - 1] & m1


cdef inline void swap_cols_range(u64* a, u64* b, Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef Py_ssize_t w0, w1, w
    cdef u64 x, msk
    if hi <= lo:
        return
    w0 = lo >> 6
    w1 = (hi - 1) >> 6
    for w in range(w0, w1 + 1):
        msk = ONES
        if w == w0:
            msk &= first_mask(lo)
        if w == w1:
            msk &= last_mask(hi)
        x = (a[w] ^ b[w]) & msk
        a[w] ^= x
        b[w] ^= x


cdef inline void clear_cols(u64* row, Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef Py_ssize_t w0, w1, w
    if hi <= lo:
        return
    w0 = lo >> 6
    w1 = (hi - 1) >> 6
    if w0 == w1:
        row[w0] &= ~(first_mask(lo) & last_mask(hi))
        return
    row[w0] &= ~first_mask(lo)
    for w in range(w0 + 1, w1):
        row[w] = 0
    row[w1] &= ~last_mask(hi)


cdef inline void col_swap_rows(u64* base, Py_ssize_t stride, Py_ssize_t a, Py_ssize_t b,
                               Py_ssize_t rs, Py_ssize_t re) nogil:
    cdef Py_ssize_t t, aw, bw, i
    cdef int ab, bb, delta
    cdef u64 am, bm, x
    cdef u64* R
    if a == b:
        return
    if (a & 63) < (b & 63):
        t = a
        a = b
        b = t
    aw = a >> 6
    bw = b >> 6
    ab = a & 63
    bb = b & 63
    delta = ab - bb
    am = <u64>1 << ab
    bm = <u64>1 << bb
    if aw == bw:
        for i in range(rs, re):
            R = base + i * stride + aw
            x = R[0]
            x ^= (x & bm) << delta
            x ^= (x & am) >> delta
            x ^= (x & bm) << delta
            R[0] = x
    else:
        for i in range(rs, re):
            R = base + i * stride
            R[aw] ^= (R[bw] & bm) << delta
            R[bw] ^= (R[aw] & am) >> delta
            R[aw] ^= (R[bw] & bm) << delta


# ---------------------------------------------------------------------------
# row / column primitives

def xor_rows(u64[:, ::1] W, Py_ssize_t dst, Py_ssize_t src, Py_ssize_t lo, Py_ssize_t hi,
             int64_t[::1] stats):
    if hi <= lo:
        return
    xor_cols(&W[dst, 0], &W[src, 0], lo, hi)
    stats[ROW_ADD] += 1


def swap_rows(u64[:, ::1] W, Py_ssize_t i, Py_ssize_t j, Py_ssize_t lo, Py_ssize_t hi,
              int64_t[::1] stats):
    if i == j or hi <= lo:
        return
    swap_cols_range(&W[i, 0], &W[j, 0], lo, hi)
    stats[ROW_SWAP] += 1


def col_swap(u64[:, ::1] W, Py_ssize_t a, Py_ssize_t b, Py_ssize_t rs, Py_ssize_t re,
             int64_t[::1] stats):
    if a == b or re <= rs:
        return
    col_swap_rows(&W[0, 0], W.shape[1], a, b, rs, re)
    stats[COL_SWAP] += 1


def read_bits(u64[:, ::1] W, Py_ssize_t i, Py_ssize_t c, int k):
    return read_be(&W[i, 0], c, k)


def apply_rows(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t n,
               int64_t[::1] P, Py_ssize_t plen, bint inverse, int64_t[::1] stats):
    cdef Py_ssize_t t, i, p
    if n <= 0 or plen <= 0:
        return
    for t in range(plen):
        i = plen - 1 - t if inverse else t
        p = P[i]
        if p != i:
            swap_cols_range(&W[r0 + i, 0], &W[r0 + p, 0], c0, c0 + n)
            stats[ROW_SWAP] += 1


def compress_columns(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m,
                     int64_t[::1] Q, Py_ssize_t rank, int64_t[::1] stats):
    cdef Py_ssize_t j
    if m <= 0:
        return
    for j in range(rank):
        if Q[j] != j:
            col_swap_rows(&W[0, 0], W.shape[1], c0 + j, c0 + Q[j], r0 + j, r0 + m)
            stats[COL_SWAP] += 1


def clear_region(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n):
    cdef Py_ssize_t i
    for i in range(m):
        clear_cols(&W[r0 + i, 0], c0, c0 + n)


def clear_lower(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
                Py_ssize_t rank):
    """Zero the strictly-lower part of the first ``rank`` rows and all later rows."""
    cdef Py_ssize_t i
    for i in range(m):
        if i < rank:
            clear_cols(&W[r0 + i, 0], c0, c0 + i)
        else:
            clear_cols(&W[r0 + i, 0], c0, c0 + n)


def set_identity(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t r):
    cdef Py_ssize_t i, col
    for i in range(r):
        clear_cols(&W[r0 + i, 0], c0, c0 + r)
        col = c0 + i
        W[r0 + i, col >> 6] |= <u64>1 << (col & 63)


def popcount_rows(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t n,
                  int64_t[::1] rows):
    cdef Py_ssize_t t, w, w0, w1
    cdef long long total = 0
    cdef u64* R
    cdef u64 msk
    if n <= 0:
        return 0
    w0 = c0 >> 6
    w1 = (c0 + n - 1) >> 6
    for t in range(rows.shape[0]):
        R = &W[r0 + rows[t], 0]
        for w in range(w0, w1 + 1):
            msk = ONES
            if w == w0:
                msk &= first_mask(c0)
            if w == w1:
                msk &= last_mask(c0 + n)
            total += __builtin_popcountll(R[w] & msk)
    return total


cdef inline u64 splitmix(u64 state) nogil:
    cdef u64 z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def randomize(u64[:, ::1] W, Py_ssize_t m, Py_ssize_t n, u64 threshold, u64 seed):
    """Fill an ``m x n`` matrix; bit (i, j) uses SplitMix64 draw ``i*n + j``."""
    cdef Py_ssize_t i, j
    cdef u64 state = seed
    cdef u64 word
    cdef u64* R
    for i in range(m):
        R = &W[i, 0]
        memset(R, 0, W.shape[1] * sizeof(u64))
        word = 0
        for j in range(n):
            state += 0x9E3779B97F4A7C15ULL
            if (splitmix(state) >> 11) < threshold:
                word |= <u64>1 << (j & 63)
            if (j & 63) == 63:
                R[j >> 6] = word
                word = 0
        if n & 63:
            R[n >> 6] = word


# ---------------------------------------------------------------------------
# cubic reference eliminations

def gauss_rref(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
               int64_t[::1] stats):
    cdef Py_ssize_t r = 0, j, i, p, col, cend = c0 + n
    cdef Py_ssize_t stride = W.shape[1]
    cdef u64* base
    cdef u64* piv
    cdef long long adds = 0
    if m <= 0 or n <= 0:
        return 0
    base = &W[0, 0]
    for j in range(n):
        col = c0 + j
        p = -1
        for i in range(r, m):
            if getbit(base + (r0 + i) * stride, col):
                p = i
                break
        if p < 0:
            continue
        if p != r:
            swap_cols_range(base + (r0 + r) * stride, base + (r0 + p) * stride, c0, cend)
            stats[ROW_SWAP] += 1
        piv = base + (r0 + r) * stride
        for i in range(m):
            if i != r and getbit(base + (r0 + i) * stride, col):
                xor_cols(base + (r0 + i) * stride, piv, col, cend)
                adds += 1
        r += 1
        if r == m:
            break
    stats[ROW_ADD] += adds
    return r


def gauss_pls(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
              int64_t[::1] P, int64_t[::1] Q, int64_t[::1] stats):
    """Main loop of the Gaussian PLS elimination; column compression is separate."""
    cdef Py_ssize_t r = 0, c = 0, i = 0, j = 0, l, cend = c0 + n
    cdef Py_ssize_t stride = W.shape[1]
    cdef bint found
    cdef u64* base
    cdef u64* piv
    cdef long long adds = 0
    if m <= 0 or n <= 0:
        for i in range(m):
            P[i] = i
        for i in range(n):
            Q[i] = i
        return 0
    base = &W[0, 0]
    while r < m and c < n:
        found = False
        for j in range(c, n):
            for i in range(r, m):
                if getbit(base + (r0 + i) * stride, c0 + j):
                    found = True
                    break
            if found:
                break
        if not found:
            break
        P[r] = i
        Q[r] = j
        if i != r:
            swap_cols_range(base + (r0 + r) * stride, base + (r0 + i) * stride, c0, cend)
            stats[ROW_SWAP] += 1
        if j + 1 < n:
            piv = base + (r0 + r) * stride
            for l in range(r + 1, m):
                if getbit(base + (r0 + l) * stride, c0 + j):
                    xor_cols(base + (r0 + l) * stride, piv, c0 + j + 1, cend)
                    adds += 1
        r += 1
        c = j + 1
    for i in range(r, m):
        P[i] = i
    for i in range(r, n):
        Q[i] = i
    stats[ROW_ADD] += adds
    return r


# ---------------------------------------------------------------------------
# M4RI pieces

def gauss_submatrix(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
                    Py_ssize_t r, Py_ssize_t c, int k, Py_ssize_t r_end, int64_t[::1] stats):
    cdef Py_ssize_t rs = r, j, i, l, cend = c0 + n
    cdef Py_ssize_t stride = W.shape[1]
    cdef bint found
    cdef u64* base
    cdef u64* row
    cdef long long adds = 0
    if m <= 0 or n <= 0:
        return 0
    base = &W[0, 0]
    for j in range(c, c + k):
        found = False
        for i in range(rs, r_end):
            row = base + (r0 + i) * stride
            for l in range(j - c):
                if getbit(row, c0 + c + l):
                    xor_cols(row, base + (r0 + r + l) * stride, c0 + c + l, cend)
                    adds += 1
            if getbit(row, c0 + j):
                if i != rs:
                    swap_cols_range(row, base + (r0 + rs) * stride, c0, cend)
                    stats[ROW_SWAP] += 1
                for l in range(r, rs):
                    if getbit(base + (r0 + l) * stride, c0 + j):
                        xor_cols(base + (r0 + l) * stride, base + (r0 + rs) * stride, c0 + j, cend)
                        adds += 1
                rs += 1
                found = True
                break
        if not found:
            stats[ROW_ADD] += adds
            return j - c
    stats[ROW_ADD] += adds
    return k


def make_table(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
               Py_ssize_t r, Py_ssize_t c, int k, u64[:, ::1] T, int64_t[::1] L,
               int64_t[::1] stats):
    """Gray-code table of the ``k`` rows starting at ``r``, over columns ``c..n``.

    ``T`` has ``2**k`` rows and holds the word span of those columns; T row
    ``i`` is combination ``i ^ (i >> 1)`` of the source rows.
    """
    cdef Py_ssize_t col = c0 + c, cend = c0 + n
    cdef Py_ssize_t tw0 = col >> 6
    cdef Py_ssize_t nw = ((cend - 1) >> 6) - tw0 + 1
    cdef Py_ssize_t i, w, ntab = (<Py_ssize_t>1) << k
    cdef u64 m0 = first_mask(col), m1 = last_mask(cend)
    cdef Py_ssize_t stride = W.shape[1]
    cdef u64* src
    cdef u64* cur
    cdef u64* prev
    if nw == 1:
        m0 &= m1
    memset(&T[0, 0], 0, nw * sizeof(u64))
    for i in range(1, ntab):
        src = &W[r0 + r + k - 1 - __builtin_ctzll(i), 0] + tw0
        cur = &T[i, 0]
        prev = &T[i - 1, 0]
        if nw == 1:
            cur[0] = prev[0] ^ (src[0] & m0)
        else:
            cur[0] = prev[0] ^ (src[0] & m0)
            for w in range(1, nw - 1):
                cur[w] = prev[w] ^ src[w]
            cur[nw - 1] = prev[nw - 1] ^ (src[nw - 1] & m1)
    stats[TABLE_ADD] += ntab - 1
    for i in range(ntab):
        L[read_be(&T[i, 0], col & 63, k)] = i


def make_table1(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
                Py_ssize_t r, Py_ssize_t c, int k, u64[:, ::1] T, int64_t[::1] L,
                int64_t[::1] stats):
    """Table over the upper-triangular rows ``r..r+k`` with the id correction.

    Source row ``t`` is read from column ``c + t`` on, so the L entries that
    sit left of the triangle never enter the table.
    """
    cdef Py_ssize_t col = c0 + c, cend = c0 + n
    cdef Py_ssize_t tw0 = col >> 6
    cdef Py_ssize_t nw = ((cend - 1) >> 6) - tw0 + 1
    cdef Py_ssize_t i, w, t, ntab = (<Py_ssize_t>1) << k
    cdef u64* src
    cdef u64* cur
    cdef u64 g, raw
    cdef int b
    memset(&T[0, 0], 0, nw * sizeof(u64))
    for i in range(1, ntab):
        t = k - 1 - __builtin_ctzll(i)
        cur = &T[i, 0]
        memcpy(cur, &T[i - 1, 0], nw * sizeof(u64))
        # T coordinates are W coordinates shifted by tw0 words
        src = &W[r0 + r + t, 0] + tw0
        xor_cols(cur, src, (col + t) - 64 * tw0, cend - 64 * tw0)
    stats[TABLE_ADD] += ntab - 1
    for i in range(ntab):
        L[read_be(&T[i, 0], col & 63, k)] = i
    b = col & 63
    for i in range(1, ntab):
        g = <u64>(i ^ (i >> 1))
        raw = rev_bits(g, k)
        T[i, 0] ^= raw << b
        if b + k > 64:
            T[i, 1] ^= raw >> (64 - b)


def add_rows_from_table(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
                        Py_ssize_t rs, Py_ssize_t re, Py_ssize_t c, int k,
                        u64[:, ::1] T, int64_t[::1] L, int64_t[::1] stats):
    cdef Py_ssize_t col = c0 + c, cend = c0 + n
    cdef Py_ssize_t tw0 = col >> 6
    cdef Py_ssize_t nw = ((cend - 1) >> 6) - tw0 + 1
    cdef Py_ssize_t i, j
    cdef u64 m0 = first_mask(col), m1 = last_mask(cend)
    cdef Py_ssize_t stride = W.shape[1]
    cdef u64* base
    cdef u64* row
    cdef long long adds = 0
    if re <= rs:
        return
    if nw == 1:
        m0 &= m1
    base = &W[0, 0]
    for i in range(rs, re):
        row = base + (r0 + i) * stride
        j = L[read_be(row, col, k)]
        if j:
            xor_span(row + tw0, &T[j, 0], nw, m0, m1)
            adds += 1
    stats[ROW_ADD] += adds


# ---------------------------------------------------------------------------
# MMPF pivot block

def pls_submatrix(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t c0, Py_ssize_t m, Py_ssize_t n,
                  Py_ssize_t s_r, Py_ssize_t s_c, int k, int64_t[::1] P, int64_t[::1] Q,
                  int64_t[::1] stats):
    cdef Py_ssize_t done[64]
    cdef Py_ssize_t rr, i = 0, l, c2, r2, d_r, kbar, cend = c0 + n
    cdef Py_ssize_t stride = W.shape[1]
    cdef bint found
    cdef u64* base
    cdef u64* row
    cdef long long adds = 0
    if k > 64:
        raise ValueError("k must be <= 64")
    base = &W[0, 0]
    for rr in range(k):
        done[rr] = 0
    kbar = 0
    for rr in range(k):
        found = False
        i = s_r + rr
        while i < m:
            row = base + (r0 + i) * stride
            for l in range(rr):
                if done[l] < i:
                    if getbit(row, c0 + s_c + l):
                        xor_cols(row, base + (r0 + s_r + l) * stride, c0 + s_c + l + 1, cend)
                        adds += 1
                    done[l] = i
            if getbit(row, c0 + s_c + rr):
                found = True
                break
            i += 1
        if not found:
            break
        P[s_r + rr] = i
        Q[s_r + rr] = s_c + rr
        if i != s_r + rr:
            swap_cols_range(base + (r0 + s_r + rr) * stride, base + (r0 + i) * stride, c0, cend)
            stats[ROW_SWAP] += 1
        done[rr] = i
        kbar += 1
    if kbar == 0:
        stats[ROW_ADD] += adds
        return 0, s_r - 1
    d_r = done[0]
    for l in range(1, kbar):
        if done[l] > d_r:
            d_r = done[l]
    for c2 in range(kbar):
        for r2 in range(done[c2] + 1, d_r + 1):
            row = base + (r0 + r2) * stride
            if getbit(row, c0 + s_c + c2):
                xor_cols(row, base + (r0 + s_r + c2) * stride, c0 + s_c + c2 + 1, cend)
                adds += 1
    stats[ROW_ADD] += adds
    return kbar, d_r


# ---------------------------------------------------------------------------
# multiplication and triangular solves

def mul_add_naive(u64[:, ::1] C, Py_ssize_t cr0, Py_ssize_t cc0,
                  u64[:, ::1] A, Py_ssize_t ar0, Py_ssize_t ac0,
                  u64[:, ::1] B, Py_ssize_t br0, Py_ssize_t bc0,
                  Py_ssize_t m, Py_ssize_t l, Py_ssize_t n, int64_t[::1] stats):
    """C += A*B; requires ``cc0 % 64 == bc0 % 64``."""
    cdef Py_ssize_t i, t, bw0, cw0, nw
    cdef u64 m0, m1
    cdef long long adds = 0
    cdef u64* arow
    if m <= 0 or n <= 0 or l <= 0:
        return
    bw0 = bc0 >> 6
    cw0 = cc0 >> 6
    nw = ((bc0 + n - 1) >> 6) - bw0 + 1
    m0 = first_mask(cc0)
    m1 = last_mask(cc0 + n)
    if nw == 1:
        m0 &= m1
    for i in range(m):
        arow = &A[ar0 + i, 0]
        for t in range(l):
            if getbit(arow, ac0 + t):
                xor_span(&C[cr0 + i, 0] + cw0, &B[br0 + t, 0] + bw0, nw, m0, m1)
                adds += 1
    stats[ROW_ADD] += adds


def mul_add_m4rm(u64[:, ::1] C, Py_ssize_t cr0, Py_ssize_t cc0,
                 u64[:, ::1] A, Py_ssize_t ar0, Py_ssize_t ac0,
                 u64[:, ::1] B, Py_ssize_t br0, Py_ssize_t bc0,
                 Py_ssize_t m, Py_ssize_t l, Py_ssize_t n, int k,
                 u64[:, ::1] T, int64_t[::1] stats):
    """C += A*B with Gray-code tables of ``2**k`` combinations of B's rows.

    ``T`` is scratch of ``nt * 2**k`` rows: ``nt`` tables are filled per pass
    and each row of C takes one combined update from all of them.  The
    column span of B is processed in blocks of ``T.shape[1]`` words.
    Requires ``cc0 % 64 == bc0 % 64``.
    """
    cdef Py_ssize_t s, i, w, t, g, gp, bw0, cw0, nw, wb, bw, ntab, nt, ntmax, tstride
    cdef Py_ssize_t cstride = C.shape[1]
    cdef int kk
    cdef int ks[16]
    cdef Py_ssize_t offs[16]
    cdef u64* tp[16]
    cdef u64 m0, m1, ident
    cdef long long adds = 0, tadds = 0, nz
    cdef bint first
    cdef u64* src
    cdef u64* cur
    cdef u64* prev
    cdef u64* tab
    cdef u64* crow
    cdef const u64* arow
    cdef u64* tbase
    cdef u64 *p0, *p1, *p2, *p3, *p4, *p5, *p6, *p7
    if m <= 0 or n <= 0 or l <= 0:
        return
    ntmax = T.shape[0] >> k
    if ntmax < 1:
        raise ValueError("table scratch too small")
    if ntmax > 16:
        ntmax = 16
    tstride = T.shape[1]
    tbase = &T[0, 0]
    bw0 = bc0 >> 6
    cw0 = cc0 >> 6
    nw = ((bc0 + n - 1) >> 6) - bw0 + 1
    m0 = first_mask(cc0)
    m1 = last_mask(cc0 + n)
    wb = 0
    while wb < nw:
        bw = tstride if nw - wb > tstride else nw - wb
        first = wb == 0
        s = 0
        while s < l:
            nt = 0
            while nt < ntmax and s < l:
                kk = k if l - s >= k else <int>(l - s)
                ks[nt] = kk
                offs[nt] = s
                tab = tbase + ((<Py_ssize_t>nt << k) * tstride)
                tp[nt] = tab
                ntab = (<Py_ssize_t>1) << kk
                memset(tab, 0, bw * sizeof(u64))
                for i in range(1, ntab):
                    g = i ^ (i >> 1)
                    gp = (i - 1) ^ ((i - 1) >> 1)
                    src = &B[br0 + s + kk - 1 - __builtin_ctzll(i), 0] + bw0 + wb
                    cur = tab + g * tstride
                    prev = tab + gp * tstride
                    for w in range(bw):
                        cur[w] = prev[w] ^ src[w]
                # masking after the fact is fine because the table is linear
                if wb == 0 or wb + bw == nw:
                    for i in range(1, ntab):
                        cur = tab + i * tstride
                        if wb == 0:
                            cur[0] &= m0
                        if wb + bw == nw:
                            cur[bw - 1] &= m1
                if first:
                    tadds += ntab - 1
                s += kk
                nt += 1
            for i in range(m):
                arow = &A[ar0 + i, 0]
                crow = &C[0, 0] + (cr0 + i) * cstride + cw0 + wb
                nz = 0
                if nt == 8:
                    ident = read_be(arow, ac0 + offs[0], ks[0])
                    nz += ident != 0
                    p0 = tp[0] + ident * tstride
                    ident = read_be(arow, ac0 + offs[1], ks[1])
                    nz += ident != 0
                    p1 = tp[1] + ident * tstride
                    ident = read_be(arow, ac0 + offs[2], ks[2])
                    nz += ident != 0
                    p2 = tp[2] + ident * tstride
                    ident = read_be(arow, ac0 + offs[3], ks[3])
                    nz += ident != 0
                    p3 = tp[3] + ident * tstride
                    ident = read_be(arow, ac0 + offs[4], ks[4])
                    nz += ident != 0
                    p4 = tp[4] + ident * tstride
                    ident = read_be(arow, ac0 + offs[5], ks[5])
                    nz += ident != 0
                    p5 = tp[5] + ident * tstride
                    ident = read_be(arow, ac0 + offs[6], ks[6])
                    nz += ident != 0
                    p6 = tp[6] + ident * tstride
                    ident = read_be(arow, ac0 + offs[7], ks[7])
                    nz += ident != 0
                    p7 = tp[7] + ident * tstride
                    for w in range(bw):
                        crow[w] ^= p0[w] ^ p1[w] ^ p2[w] ^ p3[w] ^ p4[w] ^ p5[w] ^ p6[w] ^ p7[w]
                else:
                    for t in range(nt):
                        ident = read_be(arow, ac0 + offs[t], ks[t])
                        if ident:
                            nz += 1
                            p0 = tp[t] + ident * tstride
                            for w in range(bw):
                                crow[w] ^= p0[w]
                if first:
                    adds += nz
        wb += bw
    stats[ROW_ADD] += adds
    stats[TABLE_ADD] += tadds


def trsm_lower_unit(u64[:, ::1] Lw, Py_ssize_t lr0, Py_ssize_t lc0,
                    u64[:, ::1] Bw, Py_ssize_t br0, Py_ssize_t bc0,
                    Py_ssize_t r, Py_ssize_t n, int64_t[::1] stats):
    """Forward substitution; entries of L on/above the diagonal are ignored."""
    cdef Py_ssize_t i, j
    cdef long long adds = 0
    cdef u64* lrow
    if r <= 1 or n <= 0:
        return
    for i in range(1, r):
        lrow = &Lw[lr0 + i, 0]
        for j in range(i):
            if getbit(lrow, lc0 + j):
                xor_cols(&Bw[br0 + i, 0], &Bw[br0 + j, 0], bc0, bc0 + n)
                adds += 1
    stats[ROW_ADD] += adds


def trsm_upper_unit(u64[:, ::1] Uw, Py_ssize_t ur0, Py_ssize_t uc0,
                    u64[:, ::1] Bw, Py_ssize_t br0, Py_ssize_t bc0,
                    Py_ssize_t r, Py_ssize_t n, int64_t[::1] stats):
    """Back substitution; entries of U on/below the diagonal are ignored."""
    cdef Py_ssize_t i, j
    cdef long long adds = 0
    cdef u64* urow
    if r <= 1 or n <= 0:
        return
    for i in range(r - 2, -1, -1):
        urow = &Uw[ur0 + i, 0]
        for j in range(i + 1, r):
            if getbit(urow, uc0 + j):
                xor_cols(&Bw[br0 + i, 0], &Bw[br0 + j, 0], bc0, bc0 + n)
                adds += 1
    stats[ROW_ADD] += adds


def gather_columns(u64[:, ::1] W, Py_ssize_t r0, Py_ssize_t m, int64_t[::1] cols,
                   u64[:, ::1] G):
    """Row ``i`` of ``G`` gets the bits of row ``r0 + i`` at the absolute columns ``cols``."""
    cdef Py_ssize_t i, t, c, nc = cols.shape[0]
    cdef const u64* row
    cdef u64* out
    cdef u64 acc
    for i in range(m):
        row = &W[r0 + i, 0]
        out = &G[i, 0]
        acc = 0
        for t in range(nc):
            c = cols[t]
            acc |= ((row[c >> 6] >> (c & 63)) & 1) << (t & 63)
            if (t & 63) == 63:
                out[t >> 6] = acc
                acc = 0
        if nc & 63:
            out[nc >> 6] = acc
