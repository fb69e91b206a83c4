"""Per-prime orchestration: from p to its irregular indices.

The odd-index DFT components of the f_c values along a generator give the
scaled Bernoulli residues.  The length-(p-1)/2 problem is split Good-Thomas
style into an m x n grid (m the 7-smooth part), horizontal rows of length n
go through a Rader or chirp convolution, and the vertical length-m columns
are in-place mixed-radix FFTs over Z/pZ.

Everything is stored doubled (a~ = 2 f_c is always an integer), which cancels
against the factor 2 from the antisymmetry halving, so the horizontal rows
compute plain sums of omega^(k l) a~_k with no rational arithmetic anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as k
from . import ntt, rader, umbrella
from .arith import (
    Factorization,
    element_order,
    factorize,
    inv_mod,
    is_prime,
    primitive_root,
    smooth_split,
)

RADER1 = "rader1"
RADER2 = "rader2"
UMBRELLA = "umbrella"
STRATEGIES = (RADER1, RADER2, UMBRELLA)


@dataclass
class PrimeContext:
    """Everything derived from p that the pipeline needs."""

    p: int
    gamma: int
    c: int
    alpha_c: int
    m: int
    n: int
    n_factors: Factorization
    omega: int  # gamma^(4m^2), order n
    theta: int  # gamma^(n^2), order 2m
    xi: int  # gamma^(2m^2), xi^2 = omega
    strategy: str
    rader_plan: rader.RaderPlan1 | None = None
    rader_plan1: rader.RaderPlan1 | None = None
    rader_plan2: rader.RaderPlan1 | None = None
    de_split: rader.DeSplit | None = None


@dataclass
class Layout:
    """Good-Thomas grid: a2[i2, i1] = 2 f_c(gamma^i) at i = 2m*i1 + n*i2 mod p-1."""

    a2: np.ndarray
    d: np.ndarray | None = None


@dataclass
class ResidueTable:
    """Transform outputs and everything read off them for one prime."""

    b: np.ndarray  # b_j indexed by j (odd entries populated)
    bern: np.ndarray  # B_r mod p, index k <-> r = 2k + 2
    irregular: tuple[int, ...]
    checksum: int
    ten_pairs: tuple[tuple[int, int], ...]  # (r, B_r mod p), sorted by (residue, r)

    def bern_value(self, r: int) -> int:
        return int(self.bern[(r - 2) // 2])

    def b_value(self, j: int) -> int:
        return int(self.b[j])


@dataclass
class IrregularRecord:
    p: int
    strategy: str
    fallback: bool
    irregular: tuple[int, ...]
    ten_pairs: tuple[tuple[int, int], ...]
    checksum_ok: bool
    table: ResidueTable | None = None

    @property
    def i_p(self) -> int:
        return len(self.irregular)


def f_value(c: int, p: int, x: int) -> int:
    """2 * f_c(x): twice the sawtooth floor(c*(x/c mod p)/p) - (c-1)/2."""
    y = x * inv_mod(c, p) % p
    return 2 * (c * y // p) - (c - 1)


def classify_prime(p: int, force_strategy: str | None = None) -> PrimeContext:
    """Pick the row strategy for p: rader1 / rader2 when the structure and the
    order thresholds allow it, the universal umbrella otherwise."""
    if p < 5 or not is_prime(p):
        raise ValueError(f"need an odd prime >= 5, got {p}")
    if force_strategy is not None and force_strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {force_strategy!r}")
    pm1 = factorize(p - 1)
    gamma = primitive_root(p, pm1)
    m, n = smooth_split((p - 1) // 2)
    nfac = factorize(n)
    omega = pow(gamma, 4 * m * m % (p - 1), p)
    theta = pow(gamma, n * n % (p - 1), p)
    xi = pow(gamma, 2 * m * m % (p - 1), p)

    def ctx(strategy, c, alpha, **plans):
        return PrimeContext(p, gamma, c, alpha, m, n, nfac, omega, theta, xi, strategy, **plans)

    def umbrella_ctx():
        return ctx(UMBRELLA, gamma, p - 1)

    exps = [e for _, e in nfac.factors]
    if n == 1:
        eligible = RADER1  # degenerate: the horizontal stage is a copy
    elif exps == [1]:
        eligible = RADER1
    elif exps == [1, 1]:
        eligible = RADER2
    else:
        eligible = None  # >= 3 factors or a repeated factor: umbrella only

    if force_strategy == UMBRELLA:
        return umbrella_ctx()
    if force_strategy in (RADER1, RADER2) and eligible != force_strategy:
        raise ValueError(f"p = {p} does not qualify for {force_strategy}")
    if eligible is None:
        return umbrella_ctx()

    c = alpha = None
    for cand in (2, 3):
        a = element_order(cand, p, pm1)
        if 100 * a > p - 1:
            c, alpha = cand, a
            break
    if c is None:
        return umbrella_ctx()

    try:
        if eligible == RADER1:
            plan = rader.build_rader_plan(n) if n > 1 else None
            return ctx(RADER1, c, alpha, rader_plan=plan)
        n1, n2 = nfac.primes()
        return ctx(
            RADER2,
            c,
            alpha,
            rader_plan1=rader.build_rader_plan(n1),
            rader_plan2=rader.build_rader_plan(n2),
            de_split=rader.build_de_split(n1, n2),
        )
    except rader.Rejected:
        if force_strategy in (RADER1, RADER2):
            raise
        return umbrella_ctx()


def build_layout(ctx: PrimeContext) -> Layout:
    p, m, n = ctx.p, ctx.m, ctx.n
    if ctx.c == 2:
        avec = k.fc_vec_c2(p, ctx.gamma)
    elif ctx.c == 3:
        avec = k.fc_vec_c3(p, ctx.gamma)
    else:
        avec = k.fc_vec_gamma(p, ctx.gamma, inv_mod(ctx.gamma, p))
    idx = np.add.outer(n * np.arange(m, dtype=np.int64), 2 * m * np.arange(n, dtype=np.int64))
    idx[idx >= p - 1] -= p - 1
    return Layout(a2=avec[idx])


def horizontal_dfts(ctx: PrimeContext, layout: Layout) -> Layout:
    """Fill layout.d with the length-n row DFTs (strategy dispatch)."""
    p = ctx.p
    if ctx.n == 1:
        layout.d = (layout.a2.astype(np.int64) % p).astype(np.uint64)
        return layout
    if ctx.strategy == RADER1:
        layout.d = rader.rader1_rows(ctx, layout.a2, rader.prepare_rader1(ctx))
    elif ctx.strategy == RADER2:
        layout.d = rader.rader2_rows(ctx, layout.a2, rader.prepare_rader2(ctx))
    else:
        inv2 = (p + 1) // 2
        a_res = (layout.a2.astype(np.int64) % p).astype(np.uint64) * np.uint64(inv2) % np.uint64(p)
        layout.d = umbrella.bluestein_rows(ctx, a_res, umbrella.prepare_v(ctx))
    return layout


def _fft_axis0_modp(mat: np.ndarray, w_pows: np.ndarray, p: int) -> np.ndarray:
    """Batched DFT along axis 0 over Z/pZ, mixed radix 2/3/5/7 (recursive)."""
    n = mat.shape[0]
    if n == 1:
        return mat
    for r in (2, 3, 5, 7):
        if n % r == 0:
            break
    else:  # pragma: no cover - n is 7-smooth by construction
        raise ValueError(f"length {n} not 7-smooth")
    s = n // r
    batch = mat.shape[1]
    sub = _fft_axis0_modp(mat.reshape(s, r * batch), w_pows[::r], p)
    y = sub.reshape(s, r, batch)
    pu = np.uint64(p)
    out = np.empty((n, batch), dtype=np.uint64)
    j1 = np.arange(s, dtype=np.int64)
    for j2 in range(r):
        acc = y[:, 0, :].copy()
        for t in range(1, r):
            tw = w_pows[(t * (j1 + j2 * s)) % n]
            acc = (acc + y[:, t, :] * tw[:, None]) % pu
        out[j2 * s : (j2 + 1) * s] = acc
    return out


def vertical_dfts(ctx: PrimeContext, layout: Layout) -> np.ndarray:
    """Twist rows by theta^(i2) and FFT the columns; returns b indexed by j."""
    p, m, n = ctx.p, ctx.m, ctx.n
    pu = np.uint64(p)
    theta_pows = k.pow_seq_modp(ctx.theta, m, p)
    twisted = layout.d * theta_pows[:, None] % pu
    w_pows = k.pow_seq_modp(ctx.theta * ctx.theta % p, m, p)
    bmat = _fft_axis0_modp(twisted, w_pows, p)
    j_idx = np.add.outer(
        n * (2 * np.arange(m, dtype=np.int64) + 1), 2 * m * np.arange(n, dtype=np.int64)
    )
    j_idx[j_idx >= p - 1] -= p - 1
    b_all = np.zeros(p - 1, dtype=np.uint64)
    b_all[j_idx] = bmat
    return b_all


def recover_missing(ctx: PrimeContext) -> dict[int, int]:
    """B_r for the even r killed by c^r = 1, via the O(p) length-N DFT."""
    p, alpha = ctx.p, ctx.alpha_c
    if ctx.c not in (2, 3) or alpha == p - 1:
        return {}
    n_buckets = (p - 1) // alpha
    sums2 = k.missing_bucket_sums(p, ctx.gamma, inv_mod(ctx.gamma, p), n_buckets)
    ga_pows = k.pow_seq_modp(pow(ctx.gamma, alpha, p), n_buckets, p)
    inv2 = (p + 1) // 2
    pu = np.uint64(p)
    out: dict[int, int] = {}
    for j in range(1, n_buckets):
        r = j * alpha
        if r % 2 or r > p - 3:
            continue
        idx = (j * np.arange(n_buckets, dtype=np.int64)) % n_buckets
        t2 = int((ga_pows[idx] * sums2 % pu).sum() % pu)
        denom = (pow(ctx.gamma, r, p) - 1) % p
        out[r] = t2 * inv2 % p * (r % p) % p * inv_mod(denom, p) % p
    return out


def _checksum(bern: np.ndarray, p: int) -> int:
    """C_p = sum 2^r (r+1) B_r mod p over 0 <= r <= p-3 (B_0 = 1, B_1 = -1/2)."""
    inv2 = (p + 1) // 2
    pow4 = k.pow_seq_modp(4, bern.shape[0] + 1, p)
    total = int(k.checksum_sum(bern, pow4, p))
    return (1 + 4 * (p - inv2) + total) % p


def assemble(ctx: PrimeContext, b_all: np.ndarray, missing: dict[int, int]) -> ResidueTable:
    """Turn b_j into B_r for all even r, extract indices, pairs and checksum."""
    p, c = ctx.p, ctx.c
    count = (p - 3) // 2  # even r in [2, p-3]
    r_arr = np.arange(2, p - 1, 2, dtype=np.int64)
    bj = b_all[1::2][:count]
    cpows = k.pow_seq_modp(c * c % p, count + 1, p)
    denom = (cpows[1 : count + 1] + np.uint64(p - 1)) % np.uint64(p)
    dead = denom == 0
    denom[dead] = 1
    inv = k.batch_inv_modp(np.ascontiguousarray(denom), p)
    pu = np.uint64(p)
    bern = (r_arr % p).astype(np.uint64) * bj % pu * inv % pu
    if dead.any():
        dead_r = r_arr[dead]
        if set(int(r) for r in dead_r) != set(missing):
            raise AssertionError("recovered indices do not match c^r = 1 positions")
        for r in dead_r:
            bern[(int(r) - 2) // 2] = missing[int(r)]
    irregular = tuple(int(r) for r in r_arr[bern == 0])

    take = min(10, count)
    cut = np.argpartition(bern, take - 1)[:take]
    thresh = bern[cut].max()
    cand = np.flatnonzero(bern <= thresh)
    order = np.lexsort((r_arr[cand], bern[cand]))
    pairs = tuple((int(r_arr[cand[i]]), int(bern[cand[i]])) for i in order[:take])

    return ResidueTable(
        b=b_all,
        bern=bern,
        irregular=irregular,
        checksum=_checksum(bern, p),
        ten_pairs=pairs,
    )


def checksum_verify(table: ResidueTable, p: int) -> bool:
    """True iff the checksum over the full residue table equals -4 mod p."""
    return _checksum(table.bern, p) == (p - 4) % p


def compute_irregular(p: int, force_strategy: str | None = None, keep_table: bool = False) -> IrregularRecord:
    """Run the full pipeline for one prime."""
    ctx = classify_prime(p, force_strategy)
    fallback = False
    try:
        layout = horizontal_dfts(ctx, build_layout(ctx))
    except (rader.Rejected, ntt.NoPrimeFound):
        # a strategy error after classification: redo with the umbrella
        ctx = classify_prime(p, UMBRELLA)
        fallback = True
        layout = horizontal_dfts(ctx, build_layout(ctx))
    b_all = vertical_dfts(ctx, layout)
    table = assemble(ctx, b_all, recover_missing(ctx))
    return IrregularRecord(
        p=p,
        strategy=ctx.strategy,
        fallback=fallback,
        irregular=table.irregular,
        ten_pairs=table.ten_pairs,
        checksum_ok=table.checksum == (p - 4) % p,
        table=table if keep_table else None,
    )
