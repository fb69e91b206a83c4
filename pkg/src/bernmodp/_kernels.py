"""Numba-compiled hot loops: 62-bit Montgomery NTT cores and mod-p sequence scans.

All 62-bit modular multiplication goes through Montgomery reduction with
R = 2^64; the high 64 bits of products are assembled from 32-bit limbs since
there is no native 128-bit type.  Values mod p (p < 2^31) use plain uint64
arithmetic, where products cannot overflow.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U1 = np.uint64(1)
_U32 = np.uint64(32)
_M32 = np.uint64(0xFFFFFFFF)


@njit(cache=True, inline="always")
def _mulhi(a, b):
    a1 = a >> _U32
    a0 = a & _M32
    b1 = b >> _U32
    b0 = b & _M32
    ll = a0 * b0
    lh = a0 * b1
    hl = a1 * b0
    mid = (ll >> _U32) + (lh & _M32) + (hl & _M32)
    return a1 * b1 + (lh >> _U32) + (hl >> _U32) + (mid >> _U32)


@njit(cache=True, inline="always")
def _montmul(a, b, q, nq):
    """a * b / 2^64 mod q; nq = -q^{-1} mod 2^64; needs a, b < q < 2^63."""
    t_lo = a * b
    t_hi = _mulhi(a, b)
    u = t_lo * nq
    res = t_hi + _mulhi(u, q)
    if t_lo != np.uint64(0):
        res += _U1
    if res >= q:
        res -= q
    return res


@njit(cache=True, inline="always")
def _shoupmul(w, wsh, y, q):
    """w * y mod q with precomputed wsh = floor(w * 2^64 / q); w < q, y < q < 2^63."""
    t = _mulhi(wsh, y)
    r = w * y - t * q
    if r >= q:
        r -= q
    return r


@njit(cache=True)
def mont_geom(first, step_mont, count, q, nq):
    """first, first*s, first*s^2, ... with s given in Montgomery form."""
    out = np.empty(count, dtype=np.uint64)
    cur = first
    for i in range(count):
        out[i] = cur
        cur = _montmul(cur, step_mont, q, nq)
    return out


@njit(cache=True)
def shoup_table(vals, q):
    """floor(v * 2^64 / q) per element (binary long division; v < q < 2^63)."""
    out = np.empty(vals.shape[0], dtype=np.uint64)
    for i in range(vals.shape[0]):
        rem = vals[i]
        quot = np.uint64(0)
        for _ in range(64):
            quot <<= _U1
            rem <<= _U1
            if rem >= q:
                rem -= q
                quot |= _U1
        out[i] = quot
    return out


@njit(cache=True, inline="always")
def _addmod(a, b, q):
    s = a + b
    if s >= q:
        s -= q
    return s


@njit(cache=True, inline="always")
def _submod(a, b, q):
    d = a + q - b
    if d >= q:
        d -= q
    return d


@njit(cache=True)
def ntt_dif_rows(mat, tw, twsh, q):
    """Forward radix-2 DIF NTT of every row, in place; output bit-reversed.

    tw[j] = w^j for j < L/2 (w a primitive L-th root), twsh the Shoup table.
    """
    rows, length = mat.shape
    for r in range(rows):
        x = mat[r]
        size = length
        while size > 1:
            half = size >> 1
            stride = length // size
            for base in range(0, length, size):
                for j in range(half):
                    w = tw[j * stride]
                    wsh = twsh[j * stride]
                    u = x[base + j]
                    v = x[base + j + half]
                    s = u + v
                    if s >= q:
                        s -= q
                    d = u + q - v
                    if d >= q:
                        d -= q
                    x[base + j] = s
                    x[base + j + half] = _shoupmul(w, wsh, d, q)
            size = half


@njit(cache=True)
def ntt_dit_rows(mat, twinv, twinvsh, q, scale, scalesh):
    """Inverse radix-2 DIT NTT of every row (bit-reversed input), in place,
    with a final multiplication by scale (normally 1/L)."""
    rows, length = mat.shape
    for r in range(rows):
        x = mat[r]
        size = 2
        while size <= length:
            half = size >> 1
            stride = length // size
            for base in range(0, length, size):
                for j in range(half):
                    w = twinv[j * stride]
                    wsh = twinvsh[j * stride]
                    u = x[base + j]
                    t = _shoupmul(w, wsh, x[base + j + half], q)
                    s = u + t
                    if s >= q:
                        s -= q
                    d = u + q - t
                    if d >= q:
                        d -= q
                    x[base + j] = s
                    x[base + j + half] = d
            size <<= 1
        for i in range(length):
            x[i] = _shoupmul(scale, scalesh, x[i], q)


@njit(cache=True)
def pad_mod_rows(src, length, q):
    """Zero-padded uint64 rows holding the signed src reduced into [0, q)."""
    rows, cols = src.shape
    out = np.zeros((rows, length), dtype=np.uint64)
    qi = np.int64(q)
    for r in range(rows):
        for i in range(cols):
            v = np.int64(src[r, i]) % qi
            out[r, i] = np.uint64(v)
    return out


@njit(cache=True)
def lift_rows_modp(w, q, p):
    """Centered lift of residues mod q into residues mod p, one pass."""
    rows, length = w.shape
    out = np.empty((rows, length), dtype=np.uint64)
    half = q >> _U1
    corr = (p - q % p) % p
    for r in range(rows):
        for i in range(length):
            v = w[r, i] % p
            if w[r, i] > half:
                v += corr
                if v >= p:
                    v -= p
            out[r, i] = v
    return out


@njit(cache=True)
def crt_rows_modp(w1, w2, q1, q2, c, csh, p):
    """Two-prime CRT of centered values, reduced mod p, one pass.

    c = inv(q1) mod q2 with its Shoup companion.  The sign test t > q2/2 is
    valid because true values are much smaller than q1*q2/2.
    """
    rows, length = w1.shape
    out = np.empty((rows, length), dtype=np.uint64)
    half = q2 >> _U1
    q1p = q1 % p
    corr = (p - (q1 % p) * (q2 % p) % p) % p
    for r in range(rows):
        for i in range(length):
            a = w1[r, i]
            d = w2[r, i] + q2 - a % q2
            if d >= q2:
                d -= q2
            t = _shoupmul(c, csh, d, q2)
            v = (a % p + q1p * (t % p)) % p
            if t > half:
                v += corr
                if v >= p:
                    v -= p
            out[r, i] = v
    return out


@njit(cache=True)
def pointwise_vec(mat, vec_mont, q, nq):
    """mat[r, i] *= vec[i], with vec in Montgomery form (result exact)."""
    rows, length = mat.shape
    for r in range(rows):
        for i in range(length):
            mat[r, i] = _montmul(mat[r, i], vec_mont[i], q, nq)


@njit(cache=True)
def pointwise_mat(a, b_mont, q, nq):
    """a[r, i] *= b[r, i], with b in Montgomery form."""
    rows, length = a.shape
    for r in range(rows):
        for i in range(length):
            a[r, i] = _montmul(a[r, i], b_mont[r, i], q, nq)


@njit(cache=True)
def scale_rows(mat, c_mont, q, nq):
    rows, length = mat.shape
    for r in range(rows):
        for i in range(length):
            mat[r, i] = _montmul(mat[r, i], c_mont, q, nq)


@njit(cache=True)
def dft_matrix_mid(arr, w_mont, q, nq):
    """DFT along the middle axis of a 3-d array by an explicit root-power matrix.

    w_mont[j, b] holds the root powers (times any scaling) in Montgomery form,
    so each output stays in normal form.  Used for short cyclic dimensions.
    """
    na, e, nc = arr.shape
    out = np.empty_like(arr)
    for a in range(na):
        for c in range(nc):
            for j in range(e):
                acc = np.uint64(0)
                for b in range(e):
                    acc += _montmul(w_mont[j, b], arr[a, b, c], q, nq)
                    if acc >= q:
                        acc -= q
                out[a, j, c] = acc
    return out


@njit(cache=True)
def modpow(base, exp, m):
    result = np.uint64(1)
    base = base % m
    e = exp
    while e > 0:
        if e & 1:
            result = result * base % m
        base = base * base % m
        e >>= 1
    return result


@njit(cache=True)
def pow_seq_modp(base, count, p):
    """[1, base, base^2, ...] mod p, p < 2^31."""
    out = np.empty(count, dtype=np.uint64)
    cur = np.uint64(1)
    b = np.uint64(base)
    pp = np.uint64(p)
    for i in range(count):
        out[i] = cur
        cur = cur * b % pp
    return out


@njit(cache=True)
def geom_y_seq(start, z, n, y, m_lag, length, p):
    """start^(z^s) mod p for s < length: first m_lag terms directly, then
    each term is the y-th power of the term m_lag positions back."""
    out = np.empty(length, dtype=np.uint64)
    pp = np.uint64(p)
    zs = np.uint64(1)
    head = min(m_lag, length)
    for s in range(head):
        out[s] = modpow(np.uint64(start), zs, pp)
        zs = zs * np.uint64(z) % np.uint64(n)
    if y == 2:
        for s in range(m_lag, length):
            v = out[s - m_lag]
            out[s] = v * v % pp
    else:
        for s in range(m_lag, length):
            v = out[s - m_lag]
            out[s] = v * v % pp * v % pp
    return out


@njit(cache=True)
def batch_inv_modp(vals, p):
    """Inverses mod p of an array of nonzero residues (Montgomery's trick)."""
    n = vals.shape[0]
    out = np.empty(n, dtype=np.uint64)
    pp = np.uint64(p)
    acc = np.uint64(1)
    for i in range(n):
        out[i] = acc
        acc = acc * vals[i] % pp
    inv = modpow(acc, np.uint64(p - 2), pp)
    for i in range(n - 1, -1, -1):
        out[i] = out[i] * inv % pp
        inv = inv * vals[i] % pp
    return out


@njit(cache=True)
def fc_vec_c2(p, gamma):
    """2*f_2(gamma^i) for i = 0..p-2: +1 for odd residues, -1 for even."""
    out = np.empty(p - 1, dtype=np.int8)
    x = np.uint64(1)
    g = np.uint64(gamma)
    pp = np.uint64(p)
    for i in range(p - 1):
        out[i] = 1 if x & np.uint64(1) else -1
        x = x * g % pp
    return out


@njit(cache=True)
def fc_vec_c3(p, gamma):
    """2*f_3(gamma^i): -2, +2, 0 according to x mod 3 vs 0, p, -p."""
    out = np.empty(p - 1, dtype=np.int8)
    x = np.uint64(1)
    g = np.uint64(gamma)
    pp = np.uint64(p)
    pm3 = np.uint64(p % 3)
    for i in range(p - 1):
        r = x % np.uint64(3)
        if r == np.uint64(0):
            out[i] = -2
        elif r == pm3:
            out[i] = 2
        else:
            out[i] = 0
        x = x * g % pp
    return out


@njit(cache=True)
def fc_vec_gamma(p, gamma, gamma_inv):
    """2*f_gamma(gamma^i) for i = 0..p-2, via one floor division per step."""
    out = np.empty(p - 1, dtype=np.int64)
    prev = np.uint64(gamma_inv)  # gamma^(i-1)
    g = np.uint64(gamma)
    pp = np.uint64(p)
    cm1 = np.int64(gamma - 1)
    for i in range(p - 1):
        t = g * prev
        out[i] = 2 * np.int64(t // pp) - cm1
        prev = t % pp
    return out


@njit(cache=True)
def bernoulli_sum(p, gamma, gamma_inv, h):
    """sum over i of (gamma^(r-1))^i * 2*f_gamma(gamma^i) mod p, h = gamma^(r-1)."""
    pp = np.uint64(p)
    g = np.uint64(gamma)
    cm1 = np.uint64(gamma - 1)
    prev = np.uint64(gamma_inv)
    w = np.uint64(1)
    hh = np.uint64(h)
    acc = np.uint64(0)
    for i in range(p - 1):
        t = g * prev
        f2 = np.uint64(2) * (t // pp) + pp - cm1  # 2*f~ + p, in [1, 2p)
        if f2 >= pp:
            f2 -= pp
        acc = (acc + w * f2) % pp
        prev = t % pp
        w = w * hh % pp
    return acc


@njit(cache=True)
def missing_bucket_sums(p, gamma, gamma_inv, n_buckets):
    """S[k] = sum over i = k mod N of gamma^(-i) * 2*f_gamma(gamma^i) mod p."""
    pp = np.uint64(p)
    g = np.uint64(gamma)
    ginv = np.uint64(gamma_inv)
    cm1 = np.uint64(gamma - 1)
    s = np.zeros(n_buckets, dtype=np.uint64)
    prev = ginv
    w = np.uint64(1)  # gamma^(-i)
    k = 0
    for i in range(p - 1):
        t = g * prev
        f2 = np.uint64(2) * (t // pp) + pp - cm1
        if f2 >= pp:
            f2 -= pp
        s[k] = (s[k] + w * f2) % pp
        prev = t % pp
        w = w * ginv % pp
        k += 1
        if k == n_buckets:
            k = 0
    return s


@njit(cache=True)
def sum_powers_mod(k_max, exp, m, nq, r_mod, r2):
    """sum of a^exp for a = 1..k_max, modulo m < 2^63 (Montgomery internally)."""
    one = r_mod  # 1 in Montgomery form
    acc = np.uint64(0)
    mm = np.uint64(m)
    for a in range(1, k_max + 1):
        base = _montmul(np.uint64(a), r2, mm, nq)  # to Montgomery form
        cur = one
        e = exp
        while e > 0:
            if e & 1:
                cur = _montmul(cur, base, mm, nq)
            base = _montmul(base, base, mm, nq)
            e >>= 1
        acc += _montmul(cur, _U1, mm, nq)  # back to normal form
        if acc >= mm:
            acc -= mm
    return acc


@njit(cache=True)
def checksum_sum(bern_even, pow4, p):
    """sum of 2^r (r+1) B_r over even r >= 2; bern_even[k] = B_(2k+2)."""
    pp = np.uint64(p)
    acc = np.uint64(0)
    for k in range(bern_even.shape[0]):
        r1 = np.uint64(2 * k + 3) % pp  # (r + 1) with r = 2k+2
        acc = (acc + pow4[k + 1] * r1 % pp * bern_even[k]) % pp
    return acc
