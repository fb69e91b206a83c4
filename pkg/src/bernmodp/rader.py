"""Horizontal row DFTs of prime and two-prime length via Rader's reduction.

A length-n DFT with n prime becomes a cyclic convolution of length n-1 along
a generator z of (Z/nZ)^x; picking z with z^M = y for small y in {2, 3} keeps
the root-table polynomial cheap to build.  For n = n1*n2 the outputs split
into four classes: the direct sum, two short DFTs of row sums, and a bulk
三-dimensional convolution re-split along coprime factors (d1*d2, e1, e2) so
only one dimension needs zero-padding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as k
from . import ntt
from .arith import (
    OrderTooSmall,
    element_order,
    factorize,
    inv_mod,
    primitive_root,
    solve_power_generator,
)
from .ntt import GridConvolver, NttPlan, RowConvolver, umbrella_plans

# admissibility limit for the retained cyclic structure of the 3-d convolution
MAX_CYCLIC = 1 << 16


class Rejected(ValueError):
    """This prime cannot use the Rader path; fall back to the umbrella."""


@dataclass
class RaderPlan1:
    """Rader machinery for one prime length n."""

    n: int
    z: int  # generator of (Z/nZ)^x
    m_lag: int  # z^m_lag = y
    y: int  # 2 or 3
    perm_in: np.ndarray = field(repr=False)  # s -> z^-s mod n
    perm_out: np.ndarray = field(repr=False)  # t -> z^t mod n


def build_rader_plan(n: int) -> RaderPlan1:
    """Choose y in {2, 3} with large order mod n and a generator z, z^M = y."""
    if n < 11:
        raise ValueError(f"Rader length {n} too small")
    fac = factorize(n - 1)
    for y in (2, 3):
        if 100 * element_order(y, n, fac) >= n - 1:
            try:
                z, m_lag = solve_power_generator(n, y, 100)
            except OrderTooSmall:  # pragma: no cover - screened by the order test
                continue
            perm_out = k.pow_seq_modp(z, n - 1, n).astype(np.int64)
            perm_in = k.pow_seq_modp(inv_mod(z, n), n - 1, n).astype(np.int64)
            return RaderPlan1(n, z, m_lag, y, perm_in, perm_out)
    raise Rejected(f"orders of 2 and 3 mod {n} are both below (n-1)/100")


def gen_geometric(start: int, z: int, n: int, y: int, m_lag: int, length: int, p: int) -> np.ndarray:
    """start^(z^s) mod p for s < length, the tail by repeated y-th powers."""
    return k.geom_y_seq(start, z, n, y, m_lag, length, p)


def _conv_plans(bound: int) -> list[NttPlan]:
    p1, p2 = umbrella_plans()
    return [p1] if 2 * bound < p1.q else [p1, p2]


_CYCLIC_PLANS: dict[int, list[NttPlan]] = {}


def cyclic_plans(f: int, count: int = 1) -> list[NttPlan]:
    """Word primes q = 1 mod 2^31 * f, largest first; found on demand and cached."""
    plans = _CYCLIC_PLANS.setdefault(f, [])
    m0 = (1 << ntt.DEFAULT_TWO_ADIC) * f
    while len(plans) < count:
        below = plans[-1].q if plans else 1 << 62
        q = ntt._find_prime(m0, below)
        plans.append(NttPlan(q, ntt.DEFAULT_TWO_ADIC, f, ntt._root_of_exact_order(q, m0, ntt.DEFAULT_TWO_ADIC, f)))
    return plans[:count]


@dataclass
class DeSplit:
    """Coprime re-splitting n_i - 1 = d_i * e_i with (d1, d2) = 1, gcd(e1, e2) = 1."""

    n1: int
    n2: int
    d1: int
    e1: int
    d2: int
    e2: int
    u0: int  # order d1*d2
    u1: int  # order e1
    u2: int  # order e2


def build_de_split(n1: int, n2: int) -> DeSplit:
    """Assign each prime power of (n1-1)(n2-1) by the larger-exponent rule."""
    f1 = dict(factorize(n1 - 1).factors)
    f2 = dict(factorize(n2 - 1).factors)
    d1 = e1 = d2 = e2 = 1
    for pi in sorted(set(f1) | set(f2)):
        a1, a2 = f1.get(pi, 0), f2.get(pi, 0)
        if a1 >= a2:
            d1 *= pi**a1
            e2 *= pi**a2
        else:
            e1 *= pi**a1
            d2 *= pi**a2
    if e1 * e2 > MAX_CYCLIC:
        raise Rejected(f"cyclic part e1*e2 = {e1 * e2} too large for n = {n1}*{n2}")
    try:
        cyclic_plans(e1 * e2, 1)
    except ntt.NoPrimeFound as exc:
        raise Rejected(f"no word prime with cyclic factor {e1 * e2}") from exc
    n = n1 * n2
    g1 = primitive_root(n1)
    g2 = primitive_root(n2)
    z1 = (g1 * n2 * inv_mod(n2 % n1, n1) + n1 * inv_mod(n1 % n2, n2)) % n
    z2 = (g2 * n1 * inv_mod(n1 % n2, n2) + n2 * inv_mod(n2 % n1, n1)) % n
    u0 = pow(z1, e1, n) * pow(z2, e2, n) % n
    return DeSplit(n1, n2, d1, e1, d2, e2, u0, pow(z1, d1, n), pow(z2, d2, n))


# -- one-prime rows ---------------------------------------------------------


@dataclass
class Rader1Scratch:
    plan: RaderPlan1
    conv: RowConvolver = field(repr=False)


def prepare_rader1(ctx) -> Rader1Scratch:
    plan = ctx.rader_plan
    p, n = ctx.p, ctx.n
    v = gen_geometric(ctx.omega, plan.z, n, plan.y, plan.m_lag, n - 1, p)
    v_lift = v.astype(np.int64)
    v_lift[v > p // 2] -= p
    amax = 1 if ctx.c == 2 else 2
    bound = (n - 1) * amax * ((p - 1) // 2)
    conv = RowConvolver(_conv_plans(bound), v_lift, u_len=n - 1, out_len=2 * (n - 1))
    return Rader1Scratch(plan, conv)


def rader1_rows(ctx, a2: np.ndarray, scratch: Rader1Scratch) -> np.ndarray:
    """All horizontal rows for a prime with n prime: d = sum of omega^(k l) a~_k."""
    p, n = ctx.p, ctx.n
    pu = np.uint64(p)
    plan = scratch.plan
    a64 = a2.astype(np.int64)
    d = np.zeros((a64.shape[0], n), dtype=np.uint64)
    d[:, 0] = (a64.sum(axis=1) % p).astype(np.uint64)
    w = scratch.conv.run(a64[:, plan.perm_in], p)
    a0 = (a64[:, 0] % p).astype(np.uint64)
    vals = (a0[:, None] + w[:, : n - 1] + w[:, n - 1 :]) % pu
    d[:, plan.perm_out] = vals
    return d


def rader1_row(ctx, row, plan: RaderPlan1 | None = None, scratch: Rader1Scratch | None = None) -> np.ndarray:
    if scratch is None:
        scratch = prepare_rader1(ctx)
    return rader1_rows(ctx, np.asarray(row).reshape(1, -1), scratch)[0]


# -- two-prime rows ---------------------------------------------------------


@dataclass
class Rader2Scratch:
    split: DeSplit
    plan1: RaderPlan1
    plan2: RaderPlan1
    conv1: RowConvolver = field(repr=False)
    conv2: RowConvolver = field(repr=False)
    grid: GridConvolver = field(repr=False)
    g1_cols: np.ndarray = field(repr=False)
    g2_cols: np.ndarray = field(repr=False)
    case2_scatter: np.ndarray = field(repr=False)
    case3_scatter: np.ndarray = field(repr=False)
    idx_in: np.ndarray = field(repr=False)  # (D, e1, e2) gather into the row
    out_flat: np.ndarray = field(repr=False)
    l1_idx: np.ndarray = field(repr=False)
    l2_idx: np.ndarray = field(repr=False)


def prepare_rader2(ctx) -> Rader2Scratch:
    p, n = ctx.p, ctx.n
    sp: DeSplit = ctx.de_split
    pl1: RaderPlan1 = ctx.rader_plan1
    pl2: RaderPlan1 = ctx.rader_plan2
    n1, n2 = sp.n1, sp.n2
    amax = 1 if ctx.c == 2 else 2
    half_p = (p - 1) // 2

    omega_pows = k.pow_seq_modp(ctx.omega, n, p)

    def lift(res: np.ndarray) -> np.ndarray:
        out = res.astype(np.int64)
        out[res > p // 2] -= p
        return out

    v1 = gen_geometric(int(omega_pows[n2]), pl1.z, n1, pl1.y, pl1.m_lag, n1 - 1, p)
    conv1 = RowConvolver(
        _conv_plans((n1 - 1) * amax * n2 * half_p), lift(v1), u_len=n1 - 1, out_len=2 * (n1 - 1)
    )
    v2 = gen_geometric(int(omega_pows[n1]), pl2.z, n2, pl2.y, pl2.m_lag, n2 - 1, p)
    conv2 = RowConvolver(
        _conv_plans((n2 - 1) * amax * n1 * half_p), lift(v2), u_len=n2 - 1, out_len=2 * (n2 - 1)
    )

    big_d = sp.d1 * sp.d2
    dims = (big_d, sp.e1, sp.e2)
    nu = np.uint64(n)

    def power_grid(b0: int, b1: int, b2: int) -> np.ndarray:
        a = k.pow_seq_modp(b0, big_d, n)
        b = k.pow_seq_modp(b1, sp.e1, n)
        c = k.pow_seq_modp(b2, sp.e2, n)
        return (a[:, None, None] * b[None, :, None] % nu) * c[None, None, :] % nu

    out_idx = power_grid(sp.u0, sp.u1, sp.u2)
    idx_in = power_grid(inv_mod(sp.u0, n), inv_mod(sp.u1, n), inv_mod(sp.u2, n)).astype(np.int64)
    v3_lift = lift(omega_pows[out_idx.astype(np.int64)])

    bound3 = big_d * sp.e1 * sp.e2 * amax * half_p
    q_needed = 2 if 2 * bound3 >= cyclic_plans(sp.e1 * sp.e2, 1)[0].q else 1
    grid = GridConvolver(cyclic_plans(sp.e1 * sp.e2, q_needed), v3_lift, dims)

    out_flat = out_idx.reshape(-1).astype(np.int64)
    return Rader2Scratch(
        split=sp,
        plan1=pl1,
        plan2=pl2,
        conv1=conv1,
        conv2=conv2,
        grid=grid,
        g1_cols=n2 * pl1.perm_in,
        g2_cols=n1 * pl2.perm_in,
        case2_scatter=n2 * pl1.perm_out,
        case3_scatter=n1 * pl2.perm_out,
        idx_in=idx_in,
        out_flat=out_flat,
        l1_idx=(out_flat % n1),
        l2_idx=(out_flat % n2),
    )


def rader2_rows(ctx, a2: np.ndarray, sc: Rader2Scratch) -> np.ndarray:
    """All horizontal rows for n = n1*n2: the four output classes per row."""
    p, n = ctx.p, ctx.n
    pu = np.uint64(p)
    n1, n2 = sc.split.n1, sc.split.n2
    m_rows = a2.shape[0]
    a64 = a2.astype(np.int64)
    d = np.zeros((m_rows, n), dtype=np.uint64)
    d[:, 0] = (a64.sum(axis=1) % p).astype(np.uint64)
    a0 = (a64[:, 0] % p).astype(np.uint64)

    def sub_case(conv, plan, ni, summed, g_cols, scatter):
        """Length-ni Rader DFTs: row sums (one output class) and the g-vector."""
        u_sum = summed[:, plan.perm_in]
        u_g = a64[:, g_cols]
        w = conv.run(np.concatenate([u_sum, u_g]), p)
        wa, wg = w[:m_rows], w[m_rows:]
        s0 = (summed[:, 0] % p).astype(np.uint64)
        d[:, scatter] = (s0[:, None] + wa[:, : ni - 1] + wa[:, ni - 1 :]) % pu
        g_full = np.zeros((m_rows, ni), dtype=np.uint64)
        g_full[:, plan.perm_out] = (wg[:, : ni - 1] + wg[:, ni - 1 :]) % pu
        return g_full

    g1 = sub_case(sc.conv1, sc.plan1, n1, a64.reshape(m_rows, n2, n1).sum(axis=1), sc.g1_cols, sc.case2_scatter)
    g2 = sub_case(sc.conv2, sc.plan2, n2, a64.reshape(m_rows, n1, n2).sum(axis=1), sc.g2_cols, sc.case3_scatter)

    big_d = sc.grid.dims[0]
    u3 = a64[:, sc.idx_in]
    big = sc.grid.run(u3, p)
    fold = np.ascontiguousarray(big[:, :big_d])
    fold[:, : big_d - 1] = (fold[:, : big_d - 1] + big[:, big_d:]) % pu
    vals = (a0[:, None] + g1[:, sc.l1_idx] + g2[:, sc.l2_idx] + fold.reshape(m_rows, -1)) % pu
    d[:, sc.out_flat] = vals
    return d


def rader2_row(ctx, row, split: DeSplit | None = None, plans=None, scratch: Rader2Scratch | None = None) -> np.ndarray:
    if scratch is None:
        scratch = prepare_rader2(ctx)
    return rader2_rows(ctx, np.asarray(row).reshape(1, -1), scratch)[0]
