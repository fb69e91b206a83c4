"""Word-sized modular arithmetic and multiplicative-structure utilities.

Everything here works on plain Python ints.  Moduli stay below 2^63, so all
intermediate products fit comfortably in arbitrary-precision ints without any
special handling; callers that need vectorized arithmetic use the numpy/numba
kernels instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class NotInvertible(ValueError):
    """gcd(x, modulus) != 1 in inv_mod."""


class ZeroElement(ValueError):
    """Multiplicative order of 0 requested."""


class OrderTooSmall(ValueError):
    """solve_power_generator: (n-1)/order(y) exceeds the allowed bound."""


# deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10^24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def pow_mod(base: int, exp: int, modulus: int) -> int:
    """base^exp mod modulus for exp >= 0 (exp = 0 gives 1)."""
    if exp < 0:
        raise ValueError("negative exponent")
    return pow(base, exp, modulus)


def inv_mod(x: int, modulus: int) -> int:
    """Inverse of x modulo modulus; raises NotInvertible if gcd != 1."""
    try:
        return pow(x, -1, modulus)
    except ValueError as exc:
        raise NotInvertible(f"{x} is not invertible mod {modulus}") from exc


def is_prime(k: int) -> bool:
    """Deterministic primality test for 0 <= k < 2^63."""
    if k < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if k % q == 0:
            return k == q
    d = k - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, k)
        if x == 1 or x == k - 1:
            continue
        for _ in range(s - 1):
            x = x * x % k
            if x == k - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: value == prod(p**e for p, e in factors)."""

    value: int
    factors: tuple[tuple[int, int], ...]  # (prime, exponent), sorted by prime

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factorize(k: int) -> Factorization:
    """Factor 1 <= k < 2^32 by trial division plus Brent rho for the cofactor."""
    if not 1 <= k < 2**32:
        raise ValueError(f"factorize expects 1 <= k < 2^32, got {k}")
    n = k
    out: dict[int, int] = {}
    for q in (2, 3, 5, 7):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q = 11
    while q * q <= n and q < 65536:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 2
    # leftover cofactor is 1, a prime, or a product of two primes > 2^16
    stack = [n] if n > 1 else []
    while stack:
        c = stack.pop()
        if is_prime(c):
            out[c] = out.get(c, 0) + 1
            continue
        d = _brent_rho(c)
        stack.extend((d, c // d))
    return Factorization(k, tuple(sorted(out.items())))


def smooth_split(k: int) -> tuple[int, int]:
    """Split k = m * n with m the 7-smooth part (all powers of 2, 3, 5, 7)."""
    m, n = 1, k
    for q in (2, 3, 5, 7):
        while n % q == 0:
            m *= q
            n //= q
    return m, n


def element_order(x: int, modulus: int, phi_factors: Factorization) -> int:
    """Multiplicative order of x modulo a prime, given the factored group order."""
    if x % modulus == 0:
        raise ZeroElement("0 has no multiplicative order")
    order = modulus - 1
    for q, e in phi_factors:
        for _ in range(e):
            if order % q == 0 and pow(x, order // q, modulus) == 1:
                order //= q
            else:
                break
    return order


def primitive_root(p: int, phi_factors: Factorization | None = None) -> int:
    """Smallest generator of (Z/pZ)^x for an odd prime p."""
    if phi_factors is None:
        phi_factors = factorize(p - 1)
    primes = phi_factors.primes()
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in primes):
            return g
        g += 1


def _bsgs(h: int, target: int, order: int, modulus: int) -> int:
    """x in [0, order) with h^x = target, h of prime order; baby-step giant-step."""
    m = math.isqrt(order - 1) + 1
    table = {}
    e = 1
    for j in range(m):
        table.setdefault(e, j)
        e = e * h % modulus
    # e == h^m; giant steps multiply by h^-m
    step = pow(e, -1, modulus)
    gamma = target
    for i in range(m):
        j = table.get(gamma)
        if j is not None:
            return i * m + j
        gamma = gamma * step % modulus
    raise ArithmeticError("discrete log does not exist")


def discrete_log(y: int, g: int, n: int, nm1_factors: Factorization) -> int:
    """e with g^e = y mod n (g a generator of the full group, n prime).

    Pohlig-Hellman over the factorization of n-1, with baby-step giant-step in
    each prime-order subgroup; fine for n < 2^32.
    """
    residues, moduli = [], []
    for q, e in nm1_factors:
        qe = q**e
        h = pow(g, (n - 1) // q, n)  # order q
        x = 0
        gamma_inv = pow(g, -1, n)
        for i in range(e):
            # peel off the i-th base-q digit of the logarithm
            cur = y * pow(gamma_inv, x, n) % n
            d = _bsgs(h, pow(cur, (n - 1) // q ** (i + 1), n), q, n)
            x += d * q**i
        residues.append(x)
        moduli.append(qe)
    # CRT combine
    e_out, mod = 0, 1
    for r, m in zip(residues, moduli):
        t = (r - e_out) * pow(mod, -1, m) % m
        e_out += mod * t
        mod *= m
    return e_out


def solve_power_generator(n: int, y: int, m_max: int = 100) -> tuple[int, int]:
    """Find a generator z of (Z/nZ)^x with z^M = y, M = (n-1)/order(y).

    Raises OrderTooSmall when M > m_max.  Among the valid z the smallest is
    returned, so the result is deterministic.
    """
    if not 2 <= y < n:
        raise ValueError("need 2 <= y < n")
    fac = factorize(n - 1)
    g = primitive_root(n, fac)
    e = discrete_log(y, g, n, fac)
    m = math.gcd(e, n - 1)
    if m > m_max:
        raise OrderTooSmall(f"(n-1)/order({y}) = {m} > {m_max} for n = {n}")
    step = (n - 1) // m
    best = None
    for k in range(m):
        w = e // m + k * step
        if math.gcd(w, n - 1) == 1:
            z = pow(g, w, n)
            if best is None or z < best:
                best = z
    if best is None:  # pragma: no cover - cannot happen, see tests
        raise ArithmeticError("no generator among the m-th roots")
    return best, m


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """All primes p with lo <= p <= hi, as an int64 array (segmented sieve)."""
    if hi < max(lo, 2):
        return np.empty(0, dtype=np.int64)
    lo = max(lo, 2)
    base_limit = math.isqrt(hi)
    base = np.ones(base_limit + 1, dtype=bool)
    base[:2] = False
    for q in range(2, math.isqrt(base_limit) + 1):
        if base[q]:
            base[q * q :: q] = False
    base_primes = np.nonzero(base)[0]

    out = []
    block = 1 << 22
    for start in range(lo, hi + 1, block):
        stop = min(start + block, hi + 1)
        seg = np.ones(stop - start, dtype=bool)
        for q in base_primes:
            q = int(q)
            first = max(q * q, (start + q - 1) // q * q)
            if first < stop:
                seg[first - start :: q] = False
        if start <= 1:
            seg[: 2 - start] = False
        out.append(np.nonzero(seg)[0] + start)
    return np.concatenate(out).astype(np.int64)
