"""Shared brute-force oracles for the test suite.

Everything here evaluates definitions directly (schoolbook sums, exact
rationals); nothing reuses the transform pipeline under test.
"""

import numpy as np

from bernmodp.arith import inv_mod, primitive_root
from bernmodp.pipeline import f_value


def direct_dft_row(row, omega, p):
    """sum_k omega^(k l) row_k mod p by the double loop (row entries signed)."""
    n = len(row)
    out = []
    for ell in range(n):
        acc = 0
        for k, a in enumerate(row):
            acc = (acc + pow(omega, k * ell, p) * int(a)) % p
        out.append(acc)
    return out


def direct_b_table(p, c=None, gamma=None):
    """b_j = sum_i gamma^(ij) * f_c(gamma^i) for all odd j, by power sums."""
    if gamma is None:
        gamma = primitive_root(p)
    if c is None:
        c = gamma
    inv2 = (p + 1) // 2
    f2 = np.array([f_value(c, p, pow(gamma, i, p)) % p for i in range(p - 1)], dtype=np.uint64)
    gpow = np.array([pow(gamma, i, p) for i in range(p - 1)], dtype=np.int64)
    out = {}
    idx = np.arange(p - 1, dtype=np.int64)
    for j in range(1, p - 1, 2):
        coef = gpow[(idx * j) % (p - 1)].astype(np.uint64)
        out[j] = int((coef * f2 % p).sum() % p) * inv2 % p
    return out


def oracle_bern_table(p):
    """B_r mod p for every even r in [2, p-3] straight from the power-sum
    congruence with c = gamma (no generator-order tricks, no transforms)."""
    gamma = primitive_root(p)
    inv2 = (p + 1) // 2
    pu = np.uint64(p)
    f2 = np.array([f_value(gamma, p, x) % p for x in range(1, p)], dtype=np.uint64)
    xs = np.arange(1, p, dtype=np.uint64)
    col = xs.copy()  # x^(r-1), starting at r = 2
    step = xs * xs % pu
    out = {}
    for r in range(2, p - 2, 2):
        s = int((col * f2 % pu).sum() % pu)
        denom = (pow(gamma, r, p) - 1) % p
        out[r] = s * inv2 % p * r % p * inv_mod(denom, p) % p
        col = col * step % pu
    return out


def exact_bernoulli_mod(r, p):
    """Reduce the exact rational Bernoulli number mod p (sympy)."""
    from sympy import bernoulli

    b = bernoulli(r)
    num, den = int(b.p), int(b.q)
    return num * pow(den, -1, p) % p
