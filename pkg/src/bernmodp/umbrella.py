"""Chirp-based horizontal DFT rows, valid for every prime.

The length-n row DFT over Z/pZ is twisted by xi^(k^2) into one convolution,
lifted to Z[X] with centered coefficients and carried out modulo the two
fixed word primes, whose results are CRT-combined straight into residues
mod p.  The chirp polynomial V does not depend on the row, so its two
spectra are computed once per prime p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as k
from .ntt import RowConvolver, umbrella_plans


@dataclass
class BluesteinScratch:
    """Per-prime work data shared by all rows."""

    n: int
    xi_sq: np.ndarray  # xi^(k^2) mod p for k < n
    xi_neg_sq: np.ndarray
    v_lift: np.ndarray  # centered lift of xi^(-k^2), |.| < p/2
    conv: RowConvolver = field(repr=False)


def prepare_v(ctx) -> BluesteinScratch:
    """Build the chirp tables and the cached V spectra (one transform per word prime)."""
    p, n = ctx.p, ctx.n
    xi_pows = k.pow_seq_modp(ctx.xi, n, p)
    sq = (np.arange(n, dtype=np.int64) ** 2) % n
    xi_sq = xi_pows[sq]
    xi_neg_sq = xi_pows[(n - sq) % n]
    v_lift = xi_neg_sq.astype(np.int64)
    v_lift[xi_neg_sq > p // 2] -= p
    conv = RowConvolver(list(umbrella_plans()), v_lift, u_len=n, out_len=2 * n)
    return BluesteinScratch(n, xi_sq, xi_neg_sq, v_lift, conv)


def lifted_u(ctx, row_residues: np.ndarray, scratch: BluesteinScratch) -> np.ndarray:
    """Centered lift of xi^(k^2) * a_k, the row polynomial sent to Z[X]."""
    p = ctx.p
    u = row_residues.astype(np.uint64) * scratch.xi_sq % np.uint64(p)
    lift = u.astype(np.int64)
    lift[u > p // 2] -= p
    return lift


def bluestein_rows(ctx, rows_residues: np.ndarray, scratch: BluesteinScratch) -> np.ndarray:
    """Horizontal DFT of each row: d_l = 2 xi^(l^2) (W_l + W_(l+n)) mod p."""
    p, n = ctx.p, scratch.n
    pu = np.uint64(p)
    u = rows_residues.astype(np.uint64) * scratch.xi_sq[None, :] % pu
    lift = u.astype(np.int64)
    lift[u > p // 2] -= p
    w = scratch.conv.run(lift, p)
    d = (w[:, :n] + w[:, n : 2 * n]) % pu
    twist = np.uint64(2) * scratch.xi_sq % pu
    return d * twist[None, :] % pu


def bluestein_row(ctx, row_residues, scratch: BluesteinScratch | None = None) -> np.ndarray:
    """Single-row variant (rows of one prime all share the scratch)."""
    if scratch is None:
        scratch = prepare_v(ctx)
    row = np.asarray(row_residues, dtype=np.uint64).reshape(1, -1)
    return bluestein_rows(ctx, row, scratch)[0]
