import math
import random

import pytest

from bernmodp.arith import (
    Factorization,
    NotInvertible,
    OrderTooSmall,
    ZeroElement,
    discrete_log,
    element_order,
    factorize,
    inv_mod,
    is_prime,
    pow_mod,
    primes_in_range,
    primitive_root,
    smooth_split,
    solve_power_generator,
)


def test_pow_mod_basic():
    assert pow_mod(2, 5, 131) == 32
    assert pow_mod(2, 130, 131) == 1
    for x in (0, 1, 7, 130):
        assert pow_mod(x, 0, 131) == 1


def test_inv_mod():
    assert inv_mod(2, 131) == 66
    assert inv_mod(6, 7) == 6
    assert inv_mod(1, 97) == 1
    with pytest.raises(NotInvertible):
        inv_mod(6, 9)


def test_is_prime_examples():
    assert is_prime(1073741789)
    assert is_prime(342283)
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(2) and is_prime(3)
    assert not is_prime(4611686014132420609)  # (2^31 - 1)^2


def test_is_prime_small_exhaustive():
    sieve = [True] * 10000
    sieve[0] = sieve[1] = False
    for i in range(2, 100):
        if sieve[i]:
            for j in range(i * i, 10000, i):
                sieve[j] = False
    for k in range(10000):
        assert is_prime(k) == sieve[k]


def test_factorize_examples():
    assert factorize(65).factors == ((5, 1), (13, 1))
    assert factorize(10458).factors == ((2, 1), (3, 2), (7, 1), (83, 1))
    assert factorize(19248).factors == ((2, 4), (3, 1), (401, 1))
    assert factorize(1).factors == ()


def test_factorize_roundtrip():
    rng = random.Random(1)
    ks = list(range(1, 10**5)) + [rng.randrange(1, 2**31) for _ in range(1000)]
    for k in ks:
        fac = factorize(k)
        prod = 1
        for q, e in fac:
            assert e >= 1
            assert is_prime(q)
            prod *= q**e
        assert prod == k


def test_smooth_split_examples():
    assert smooth_split(65) == (5, 13)
    assert smooth_split((2147483579 - 1) // 2) == (1, 1073741789)
    assert smooth_split((2147477873 - 1) // 2) == (8, 134217367)


def test_smooth_split_coprimality():
    for p in primes_in_range(5, 10**5):
        m, n = smooth_split((int(p) - 1) // 2)
        assert 2 * m * n == p - 1
        assert math.gcd(n, 210) == 1
        assert math.gcd(2 * m, n) == 1


def test_element_order():
    assert element_order(2, 31, factorize(30)) == 5
    assert element_order(2, 13, factorize(12)) == 12
    assert element_order(2, 131, factorize(130)) == 130
    with pytest.raises(ZeroElement):
        element_order(0, 13, factorize(12))


def test_element_order_exhaustive_small():
    for p in primes_in_range(3, 500):
        p = int(p)
        fac = factorize(p - 1)
        for x in range(1, p):
            o = element_order(x, p, fac)
            assert pow(x, o, p) == 1
            for q in factorize(o).primes():
                assert pow(x, o // q, p) != 1


def test_primitive_root():
    assert primitive_root(131) == 2
    assert primitive_root(13) == 2
    assert primitive_root(7) == 3
    assert primitive_root(41) == 6
    for p in primes_in_range(3, 300):
        p = int(p)
        g = primitive_root(p)
        assert element_order(g, p, factorize(p - 1)) == p - 1


def test_discrete_log():
    rng = random.Random(2)
    for n in (13, 31, 131, 10459, 19249, 101917):
        fac = factorize(n - 1)
        g = primitive_root(n, fac)
        for _ in range(20):
            e = rng.randrange(n - 1)
            assert discrete_log(pow(g, e, n), g, n, fac) == e


def test_solve_power_generator():
    assert solve_power_generator(13, 2) == (2, 1)
    z, m = solve_power_generator(31, 2)
    assert m == 6
    assert pow(z, 6, 31) == 2
    assert element_order(z, 31, factorize(30)) == 30
    with pytest.raises(OrderTooSmall):
        solve_power_generator(31, 30, 10)  # order(30) = 2, M = 15


def test_solve_power_generator_random():
    rng = random.Random(3)
    primes = [int(p) for p in primes_in_range(11, 5000)]
    for _ in range(50):
        n = rng.choice(primes)
        y = rng.choice((2, 3))
        fac = factorize(n - 1)
        try:
            z, m = solve_power_generator(n, y)
        except OrderTooSmall:
            o = element_order(y, n, fac)
            assert (n - 1) // o > 100
            continue
        assert pow(z, m, n) == y % n
        assert element_order(z, n, fac) == n - 1
        assert m == (n - 1) // element_order(y, n, fac)


def test_primes_in_range():
    assert list(primes_in_range(5, 30)) == [5, 7, 11, 13, 17, 19, 23, 29]
    assert list(primes_in_range(24, 28)) == []
    assert len(primes_in_range(2, 10**6)) == 78498
    assert list(primes_in_range(2, 2)) == [2]


def test_factorization_type():
    fac = factorize(360)
    assert isinstance(fac, Factorization)
    assert fac.value == 360
    assert fac.primes() == (2, 3, 5)
