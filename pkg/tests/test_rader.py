import random

import numpy as np
import pytest

from helpers import direct_dft_row

from bernmodp import rader
from bernmodp.arith import element_order, factorize, inv_mod
from bernmodp.ntt import NoPrimeFound
from bernmodp.pipeline import build_layout, classify_prime


def test_build_rader_plan_examples():
    plan = rader.build_rader_plan(13)
    assert (plan.z, plan.m_lag, plan.y) == (2, 1, 2)
    plan = rader.build_rader_plan(31)
    assert plan.y == 2 and plan.m_lag == 6
    assert pow(plan.z, 6, 31) == 2
    assert element_order(plan.z, 31, factorize(30)) == 30


def test_build_rader_plan_rejected():
    # ord(2) and ord(3) mod 101921 are both below (n-1)/100
    with pytest.raises(rader.Rejected):
        rader.build_rader_plan(101921)


def test_permutations_mutually_inverse():
    for n in (13, 31, 10459):
        plan = rader.build_rader_plan(n)
        assert sorted(plan.perm_in.tolist()) == list(range(1, n))
        assert sorted(plan.perm_out.tolist()) == list(range(1, n))
        assert all(int(a) * int(b) % n == 1 for a, b in zip(plan.perm_in, plan.perm_out))


def test_gen_geometric():
    ctx = classify_prime(131)
    seq = rader.gen_geometric(ctx.omega, 2, 13, 2, 1, 12, 131)
    assert int(seq[0]) == ctx.omega == 112  # -19 mod 131
    assert int(seq[1]) == 99  # -32 mod 131
    want = [pow(ctx.omega, pow(2, s, 13), 131) for s in range(12)]
    assert [int(x) for x in seq] == want
    assert [int(x) for x in rader.gen_geometric(ctx.omega, 5, 13, 2, 3, 1, 131)] == [ctx.omega]
    # full sequence against direct exponentiation for n = 31
    plan = rader.build_rader_plan(31)
    base = pow(7, 2, 311)
    got = rader.gen_geometric(base, plan.z, 31, plan.y, plan.m_lag, 30, 311)
    assert [int(x) for x in got] == [pow(base, pow(plan.z, s, 31), 311) for s in range(30)]


def test_rader1_row_impulse_and_random():
    ctx = classify_prime(131)
    scratch = rader.prepare_rader1(ctx)
    impulse = np.zeros(13, dtype=np.int8)
    impulse[0] = 1
    d = rader.rader1_rows(ctx, impulse.reshape(1, -1), scratch)[0]
    assert all(int(x) == 1 for x in d)
    rng = random.Random(30)
    for _ in range(5):
        row = np.array([rng.choice((-1, 1)) for _ in range(13)], dtype=np.int8)
        got = rader.rader1_rows(ctx, row.reshape(1, -1), scratch)[0]
        assert [int(x) for x in got] == direct_dft_row(row, ctx.omega, 131)


def test_rader1_all_rows_all_small_primes():
    for p in (23, 131, 263, 1283):
        ctx = classify_prime(int(p))
        if ctx.strategy != "rader1" or ctx.n == 1:
            continue
        lay = build_layout(ctx)
        d = rader.rader1_rows(ctx, lay.a2, rader.prepare_rader1(ctx))
        for i2 in range(ctx.m):
            assert [int(x) for x in d[i2]] == direct_dft_row(lay.a2[i2], ctx.omega, p)


def test_build_de_split_examples():
    sp = rader.build_de_split(10459, 19249)
    assert (sp.d1, sp.e1, sp.d2, sp.e2) == (3**2 * 7 * 83, 2, 2**4 * 401, 3)
    sp = rader.build_de_split(11, 13)
    assert (sp.d1, sp.e1, sp.d2, sp.e2) == (5, 2, 12, 1)


def test_build_de_split_generator_orders():
    for n1, n2 in ((11, 13), (10459, 19249), (11, 41)):
        sp = rader.build_de_split(n1, n2)
        n = n1 * n2
        assert sp.d1 * sp.e1 == n1 - 1 and sp.d2 * sp.e2 == n2 - 1
        fac_orders = []
        for u, order in ((sp.u0, sp.d1 * sp.d2), (sp.u1, sp.e1), (sp.u2, sp.e2)):
            assert pow(u, order, n) == 1
            for pi in factorize(order).primes():
                assert pow(u, order // pi, n) != 1
            fac_orders.append(order)
        assert fac_orders[0] * fac_orders[1] * fac_orders[2] == (n1 - 1) * (n2 - 1)


def test_build_de_split_rejected():
    # n1 - 1 and n2 - 1 share the large prime 99991
    with pytest.raises(rader.Rejected):
        rader.build_de_split(1199893, 1799839)


def test_cyclic_plans():
    plans = rader.cyclic_plans(6, 2)
    for plan in plans:
        assert (plan.q - 1) % ((1 << 31) * 6) == 0
    assert plans[0].q > plans[1].q


def test_rader2_rows_match_direct():
    for p in (859, 9719):
        ctx = classify_prime(int(p))
        assert ctx.strategy == "rader2"
        lay = build_layout(ctx)
        d = rader.rader2_rows(ctx, lay.a2, rader.prepare_rader2(ctx))
        for i2 in range(ctx.m):
            assert [int(x) for x in d[i2]] == direct_dft_row(lay.a2[i2], ctx.omega, p), (p, i2)


def test_rader2_constant_row():
    ctx = classify_prime(859)
    scratch = rader.prepare_rader2(ctx)
    row = np.full((1, ctx.n), 2, dtype=np.int8)
    d = rader.rader2_rows(ctx, row, scratch)[0]
    assert int(d[0]) == 2 * ctx.n % ctx.p
    assert all(int(x) == 0 for x in d[1:])


def test_rader2_class_partition():
    ctx = classify_prime(859)
    sc = rader.prepare_rader2(ctx)
    n1, n2 = sc.split.n1, sc.split.n2
    n = ctx.n
    classes = (
        [0]
        + sc.case2_scatter.tolist()
        + sc.case3_scatter.tolist()
        + sc.out_flat.tolist()
    )
    assert len(classes) == n == 1 + (n1 - 1) + (n2 - 1) + (n1 - 1) * (n2 - 1)
    assert sorted(classes) == list(range(n))


def test_rader2_row_sum_bound():
    ctx = classify_prime(9719)  # c = 3, entries in {-2, 0, 2}
    lay = build_layout(ctx)
    n1 = ctx.n_factors.primes()[0]
    n2 = ctx.n // n1
    summed = lay.a2.astype(np.int64).reshape(ctx.m, n2, n1).sum(axis=1)
    assert np.abs(summed).max() <= 2 * n2
