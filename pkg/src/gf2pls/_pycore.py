"""Pure numpy fallback for the compiled kernels in ``_core.pyx``.

Signatures, in-place effects and counter updates match the compiled module
one for one; only speed differs.  Whole-column steps are vectorised with
numpy, the inherently sequential pivot searches stay as Python loops.
"""

import numpy as np

BACKEND = "python"

ROW_ADD, TABLE_ADD, ROW_SWAP, COL_SWAP = range(4)

_ONES = (1 << 64) - 1
_U0 = np.uint64(0)


def _first_mask(col):
    return (_ONES << (col & 63)) & _ONES


def _last_mask(end):
    return _ONES >> ((64 - (end & 63)) & 63)


def _span_masks(lo, hi):
    """Word span ``[w0, w1]`` of columns ``[lo, hi)`` and a mask per word."""
    w0 = lo >> 6
    w1 = (hi - 1) >> 6
    masks = np.full(w1 - w0 + 1, _ONES, dtype=np.uint64)
    masks[0] &= np.uint64(_first_mask(lo))
    masks[-1] &= np.uint64(_last_mask(hi))
    return w0, w1, masks


def _getbit(W, i, col):
    return (int(W[i, col >> 6]) >> (col & 63)) & 1


def _colbits(W, rows, col):
    """Bit ``col`` of every row in ``rows`` (slice or index array) as uint64 0/1."""
    return (W[rows, col >> 6] >> np.uint64(col & 63)) & np.uint64(1)


def _rev(v, k):
    return int(format(v, "0%db" % k)[::-1], 2) if k else 0


def _read_be(W, i, c, k):
    w = c >> 6
    b = c & 63
    v = int(W[i, w]) >> b
    if b + k > 64:
        v |= int(W[i, w + 1]) << (64 - b)
    v &= (1 << k) - 1
    return _rev(v, k)


def _read_be_rows(W, rows, c, k):
    """Big-endian k-bit ids at column ``c`` for many rows at once."""
    ids = np.zeros(len(rows), dtype=np.int64)
    for t in range(k):
        ids = (ids << 1) | _colbits(W, rows, c + t).astype(np.int64)
    return ids


def _xor_cols(D, di, S, si, lo, hi):
    if hi <= lo:
        return
    w0, w1, masks = _span_masks(lo, hi)
    D[di, w0:w1 + 1] ^= S[si, w0:w1 + 1] & masks


def _swap_cols_range(W, i, j, lo, hi):
    if hi <= lo:
        return
    w0, w1, masks = _span_masks(lo, hi)
    x = (W[i, w0:w1 + 1] ^ W[j, w0:w1 + 1]) & masks
    W[i, w0:w1 + 1] ^= x
    W[j, w0:w1 + 1] ^= x


def _clear_cols(W, rows, lo, hi):
    if hi <= lo:
        return
    w0, w1, masks = _span_masks(lo, hi)
    W[rows, w0:w1 + 1] &= ~masks


def _col_swap_rows(W, a, b, rs, re):
    if a == b or re <= rs:
        return
    if (a & 63) < (b & 63):
        a, b = b, a
    aw, bw = a >> 6, b >> 6
    delta = np.uint64((a & 63) - (b & 63))
    am = np.uint64(1 << (a & 63))
    bm = np.uint64(1 << (b & 63))
    if aw == bw:
        x = W[rs:re, aw].copy()
        x ^= (x & bm) << delta
        x ^= (x & am) >> delta
        x ^= (x & bm) << delta
        W[rs:re, aw] = x
    else:
        W[rs:re, aw] ^= (W[rs:re, bw] & bm) << delta
        W[rs:re, bw] ^= (W[rs:re, aw] & am) >> delta
        W[rs:re, aw] ^= (W[rs:re, bw] & bm) << delta


# ---------------------------------------------------------------------------
# row / column primitives

def xor_rows(W, dst, src, lo, hi, stats):
    if hi <= lo:
        return
    _xor_cols(W, dst, W, src, lo, hi)
    stats[ROW_ADD] += 1


def swap_rows(W, i, j, lo, hi, stats):
    if i == j or hi <= lo:
        return
    _swap_cols_range(W, i, j, lo, hi)
    stats[ROW_SWAP] += 1


def col_swap(W, a, b, rs, re, stats):
    if a == b or re <= rs:
        return
    _col_swap_rows(W, a, b, rs, re)
    stats[COL_SWAP] += 1


def read_bits(W, i, c, k):
    return _read_be(W, i, c, k)


def apply_rows(W, r0, c0, n, P, plen, inverse, stats):
    if n <= 0 or plen <= 0:
        return
    order = range(plen - 1, -1, -1) if inverse else range(plen)
    for i in order:
        p = int(P[i])
        if p != i:
            _swap_cols_range(W, r0 + i, r0 + p, c0, c0 + n)
            stats[ROW_SWAP] += 1


def compress_columns(W, r0, c0, m, Q, rank, stats):
    if m <= 0:
        return
    for j in range(rank):
        q = int(Q[j])
        if q != j:
            _col_swap_rows(W, c0 + j, c0 + q, r0 + j, r0 + m)
            stats[COL_SWAP] += 1


def clear_region(W, r0, c0, m, n):
    if m > 0:
        _clear_cols(W, slice(r0, r0 + m), c0, c0 + n)


def clear_lower(W, r0, c0, m, n, rank):
    for i in range(min(rank, m)):
        _clear_cols(W, r0 + i, c0, c0 + i)
    if m > rank:
        _clear_cols(W, slice(r0 + rank, r0 + m), c0, c0 + n)


def set_identity(W, r0, c0, r):
    if r <= 0:
        return
    _clear_cols(W, slice(r0, r0 + r), c0, c0 + r)
    for i in range(r):
        col = c0 + i
        W[r0 + i, col >> 6] |= np.uint64(1 << (col & 63))


def popcount_rows(W, r0, c0, n, rows):
    if n <= 0 or len(rows) == 0:
        return 0
    w0, w1, masks = _span_masks(c0, c0 + n)
    block = W[r0 + np.asarray(rows), w0:w1 + 1] & masks
    return int(np.bitwise_count(block).sum())


_GAMMA = np.uint64(0x9E3779B97F4A7C15)


def _splitmix(state):
    z = state.copy()
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def randomize(W, m, n, threshold, seed):
    W[:m] = 0
    if n == 0:
        return
    stride = W.shape[1]
    thr = np.uint64(threshold)
    cols = np.arange(1, n + 1, dtype=np.uint64)
    seed = np.uint64(seed)
    with np.errstate(over="ignore"):
        for i in range(m):
            # draw index i*n + j, state = seed + (index + 1) * gamma
            state = seed + (np.uint64(i) * np.uint64(n) + cols) * _GAMMA
            bits = (_splitmix(state) >> np.uint64(11)) < thr
            padded = np.zeros(stride * 64, dtype=bool)
            padded[:n] = bits
            W[i] = np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)


# ---------------------------------------------------------------------------
# cubic reference eliminations

def gauss_rref(W, r0, c0, m, n, stats):
    if m <= 0 or n <= 0:
        return 0
    r = 0
    cend = c0 + n
    for j in range(n):
        col = c0 + j
        bits = _colbits(W, slice(r0 + r, r0 + m), col)
        nz = np.flatnonzero(bits)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            _swap_cols_range(W, r0 + r, r0 + p, c0, cend)
            stats[ROW_SWAP] += 1
        hit = np.flatnonzero(_colbits(W, slice(r0, r0 + m), col))
        hit = hit[hit != r] + r0
        if hit.size:
            w0, w1, masks = _span_masks(col, cend)
            W[hit, w0:w1 + 1] ^= W[r0 + r, w0:w1 + 1] & masks
            stats[ROW_ADD] += int(hit.size)
        r += 1
        if r == m:
            break
    return r


def gauss_pls(W, r0, c0, m, n, P, Q, stats):
    r = c = 0
    cend = c0 + n
    while r < m and c < n:
        found = False
        for j in range(c, n):
            nz = np.flatnonzero(_colbits(W, slice(r0 + r, r0 + m), c0 + j))
            if nz.size:
                i = r + int(nz[0])
                found = True
                break
        if not found:
            break
        P[r] = i
        Q[r] = j
        if i != r:
            _swap_cols_range(W, r0 + r, r0 + i, c0, cend)
            stats[ROW_SWAP] += 1
        if j + 1 < n and r + 1 < m:
            hit = np.flatnonzero(_colbits(W, slice(r0 + r + 1, r0 + m), c0 + j)) + (r0 + r + 1)
            if hit.size:
                w0, w1, masks = _span_masks(c0 + j + 1, cend)
                W[hit, w0:w1 + 1] ^= W[r0 + r, w0:w1 + 1] & masks
                stats[ROW_ADD] += int(hit.size)
        r += 1
        c = j + 1
    for i in range(r, m):
        P[i] = i
    for i in range(r, n):
        Q[i] = i
    return r


# ---------------------------------------------------------------------------
# M4RI pieces

def gauss_submatrix(W, r0, c0, m, n, r, c, k, r_end, stats):
    if m <= 0 or n <= 0:
        return 0
    cend = c0 + n
    rs = r
    for j in range(c, c + k):
        found = False
        for i in range(rs, r_end):
            for l in range(j - c):
                if _getbit(W, r0 + i, c0 + c + l):
                    _xor_cols(W, r0 + i, W, r0 + r + l, c0 + c + l, cend)
                    stats[ROW_ADD] += 1
            if _getbit(W, r0 + i, c0 + j):
                if i != rs:
                    _swap_cols_range(W, r0 + i, r0 + rs, c0, cend)
                    stats[ROW_SWAP] += 1
                for l in range(r, rs):
                    if _getbit(W, r0 + l, c0 + j):
                        _xor_cols(W, r0 + l, W, r0 + rs, c0 + j, cend)
                        stats[ROW_ADD] += 1
                rs += 1
                found = True
                break
        if not found:
            return j - c
    return k


def _table_span(c0, c, n):
    col = c0 + c
    cend = c0 + n
    tw0 = col >> 6
    nw = ((cend - 1) >> 6) - tw0 + 1
    return col, cend, tw0, nw


def make_table(W, r0, c0, m, n, r, c, k, T, L, stats):
    col, cend, tw0, nw = _table_span(c0, c, n)
    masks = _span_masks(col, cend)[2]
    ntab = 1 << k
    T[0, :nw] = 0
    for i in range(1, ntab):
        src = r0 + r + k - 1 - ((i & -i).bit_length() - 1)
        T[i, :nw] = T[i - 1, :nw] ^ (W[src, tw0:tw0 + nw] & masks)
    stats[TABLE_ADD] += ntab - 1
    for i in range(ntab):
        L[_read_be(T, i, col & 63, k)] = i


def make_table1(W, r0, c0, m, n, r, c, k, T, L, stats):
    col, cend, tw0, nw = _table_span(c0, c, n)
    ntab = 1 << k
    T[0, :nw] = 0
    shift = 64 * tw0
    for i in range(1, ntab):
        t = k - 1 - ((i & -i).bit_length() - 1)
        T[i, :nw] = T[i - 1, :nw]
        masks = np.zeros(nw, dtype=np.uint64)
        lo = col + t - shift
        hi = cend - shift
        if hi > lo:
            a0, a1, mm = _span_masks(lo, hi)
            masks[a0:a1 + 1] = mm
        T[i, :nw] ^= W[r0 + r + t, tw0:tw0 + nw] & masks
    stats[TABLE_ADD] += ntab - 1
    for i in range(ntab):
        L[_read_be(T, i, col & 63, k)] = i
    b = col & 63
    for i in range(1, ntab):
        raw = _rev(i ^ (i >> 1), k)
        T[i, 0] ^= np.uint64((raw << b) & _ONES)
        if b + k > 64:
            T[i, 1] ^= np.uint64(raw >> (64 - b))


def add_rows_from_table(W, r0, c0, m, n, rs, re, c, k, T, L, stats):
    if re <= rs:
        return
    col, cend, tw0, nw = _table_span(c0, c, n)
    masks = _span_masks(col, cend)[2]
    rows = np.arange(r0 + rs, r0 + re)
    j = np.asarray(L)[_read_be_rows(W, rows, col, k)]
    sel = j != 0
    if sel.any():
        W[rows[sel], tw0:tw0 + nw] ^= T[j[sel], :nw] & masks
        stats[ROW_ADD] += int(sel.sum())


# ---------------------------------------------------------------------------
# MMPF pivot block

def pls_submatrix(W, r0, c0, m, n, s_r, s_c, k, P, Q, stats):
    if k > 64:
        raise ValueError("k must be <= 64")
    cend = c0 + n
    done = [0] * k
    kbar = 0
    for rr in range(k):
        found = False
        i = s_r + rr
        while i < m:
            for l in range(rr):
                if done[l] < i:
                    if _getbit(W, r0 + i, c0 + s_c + l):
                        _xor_cols(W, r0 + i, W, r0 + s_r + l, c0 + s_c + l + 1, cend)
                        stats[ROW_ADD] += 1
                    done[l] = i
            if _getbit(W, r0 + i, c0 + s_c + rr):
                found = True
                break
            i += 1
        if not found:
            break
        P[s_r + rr] = i
        Q[s_r + rr] = s_c + rr
        if i != s_r + rr:
            _swap_cols_range(W, r0 + s_r + rr, r0 + i, c0, cend)
            stats[ROW_SWAP] += 1
        done[rr] = i
        kbar += 1
    if kbar == 0:
        return 0, s_r - 1
    d_r = max(done[:kbar])
    for c2 in range(kbar):
        for r2 in range(done[c2] + 1, d_r + 1):
            if _getbit(W, r0 + r2, c0 + s_c + c2):
                _xor_cols(W, r0 + r2, W, r0 + s_r + c2, c0 + s_c + c2 + 1, cend)
                stats[ROW_ADD] += 1
    return kbar, d_r


# ---------------------------------------------------------------------------
# multiplication and triangular solves

def _mul_span(cc0, bc0, n):
    bw0 = bc0 >> 6
    cw0 = cc0 >> 6
    nw = ((bc0 + n - 1) >> 6) - bw0 + 1
    masks = np.full(nw, _ONES, dtype=np.uint64)
    masks[0] &= np.uint64(_first_mask(cc0))
    masks[-1] &= np.uint64(_last_mask(cc0 + n))
    return bw0, cw0, nw, masks


def mul_add_naive(C, cr0, cc0, A, ar0, ac0, B, br0, bc0, m, l, n, stats):
    if m <= 0 or n <= 0 or l <= 0:
        return
    bw0, cw0, nw, masks = _mul_span(cc0, bc0, n)
    arows = slice(ar0, ar0 + m)
    for t in range(l):
        hit = np.flatnonzero(_colbits(A, arows, ac0 + t))
        if hit.size:
            C[cr0 + hit, cw0:cw0 + nw] ^= B[br0 + t, bw0:bw0 + nw] & masks
            stats[ROW_ADD] += int(hit.size)


def mul_add_m4rm(C, cr0, cc0, A, ar0, ac0, B, br0, bc0, m, l, n, k, T, stats):
    # T only sizes the compiled kernel's blocking; here one full-width table is used
    if m <= 0 or n <= 0 or l <= 0:
        return
    bw0, cw0, nw, masks = _mul_span(cc0, bc0, n)
    arows = np.arange(ar0, ar0 + m)
    tab = np.zeros((1 << k, nw), dtype=np.uint64)
    s = 0
    while s < l:
        kk = min(k, l - s)
        ntab = 1 << kk
        tab[0] = 0
        for i in range(1, ntab):
            g = i ^ (i >> 1)
            gp = (i - 1) ^ ((i - 1) >> 1)
            src = br0 + s + kk - 1 - ((i & -i).bit_length() - 1)
            tab[g] = tab[gp] ^ B[src, bw0:bw0 + nw]
        stats[TABLE_ADD] += ntab - 1
        ids = _read_be_rows(A, arows, ac0 + s, kk)
        sel = np.flatnonzero(ids)
        if sel.size:
            C[cr0 + sel, cw0:cw0 + nw] ^= tab[ids[sel]] & masks
            stats[ROW_ADD] += int(sel.size)
        s += kk


def trsm_lower_unit(Lw, lr0, lc0, Bw, br0, bc0, r, n, stats):
    if r <= 1 or n <= 0:
        return
    for i in range(1, r):
        for j in range(i):
            if _getbit(Lw, lr0 + i, lc0 + j):
                _xor_cols(Bw, br0 + i, Bw, br0 + j, bc0, bc0 + n)
                stats[ROW_ADD] += 1


def trsm_upper_unit(Uw, ur0, uc0, Bw, br0, bc0, r, n, stats):
    if r <= 1 or n <= 0:
        return
    for i in range(r - 2, -1, -1):
        for j in range(i + 1, r):
            if _getbit(Uw, ur0 + i, uc0 + j):
                _xor_cols(Bw, br0 + i, Bw, br0 + j, bc0, bc0 + n)
                stats[ROW_ADD] += 1


def gather_columns(W, r0, m, cols, G):
    if m <= 0 or len(cols) == 0:
        return
    cols = np.asarray(cols)
    bits = (W[r0:r0 + m][:, cols >> 6] >> (cols & 63).astype(np.uint64)) & np.uint64(1)
    padded = np.zeros((m, G.shape[1] * 64), dtype=np.uint8)
    padded[:, :len(cols)] = bits
    G[:m] = np.packbits(padded, axis=1, bitorder="little").view("<u8")
