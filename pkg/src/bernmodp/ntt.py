"""Exact integer polynomial products and cyclic convolutions over word primes.

Transforms run over primes q < 2^62 chosen with prescribed roots of unity:
a power-of-two part for zero-padded dimensions and an arbitrary cyclic factor
for cyclic ones.  62-bit products go through Montgomery arithmetic in the
numba kernels; twiddle tables and chirp caches live on the plan and are
reused across calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from .arith import factorize, inv_mod, is_prime

ZERO_PADDED = "zero-padded"
CYCLIC = "cyclic"

# scan bound 2^31 implies padded transform lengths up to 2^31
DEFAULT_TWO_ADIC = 31

_R = 1 << 64


class NoPrimeFound(ValueError):
    """find_ntt_prime exhausted its search window."""


class ShapeMismatch(ValueError):
    """Data does not conform to the declared convolution shape."""


class BoundOverflow(ValueError):
    """Requested coefficient bound exceeds what two word primes can represent."""


# instrumentation: number of row transforms performed over any F_q
transform_count = 0


def reset_transform_count() -> None:
    global transform_count
    transform_count = 0


def _bump(n: int) -> None:
    global transform_count
    transform_count += n


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length() if n > 1 else 1


@dataclass
class ConvShape:
    """Per-dimension (length, kind); kind is "zero-padded" or "cyclic"."""

    dims: tuple[tuple[int, str], ...]

    def __post_init__(self):
        self.dims = tuple((int(n), kind) for n, kind in self.dims)
        for length, kind in self.dims:
            if length < 1:
                raise ShapeMismatch(f"bad dimension length {length}")
            if kind not in (ZERO_PADDED, CYCLIC):
                raise ShapeMismatch(f"bad dimension kind {kind!r}")

    def lengths(self) -> tuple[int, ...]:
        return tuple(length for length, _ in self.dims)

    def size(self) -> int:
        return math.prod(self.lengths())


class NttPlan:
    """A word prime q with q = 1 mod 2^two_adic * cyclic_factor and its tables."""

    def __init__(self, q: int, two_adic: int, cyclic_factor: int, root: int):
        self.q = q
        self.two_adic = two_adic
        self.cyclic_factor = cyclic_factor
        self.root = root
        self.order = (1 << two_adic) * cyclic_factor
        self._qu = np.uint64(q)
        self._nq = np.uint64((-inv_mod(q, _R)) % _R)
        self._r_mod = np.uint64(_R % q)  # 1 in Montgomery form
        self._r2 = np.uint64(_R * _R % q)
        self._tw: dict = {}
        self._scales: dict = {}
        self._bitrev: dict = {}
        self._small: dict = {}
        self._blu: dict = {}

    def __repr__(self):
        return (
            f"NttPlan(q={self.q}, two_adic={self.two_adic}, "
            f"cyclic_factor={self.cyclic_factor})"
        )

    def root_of_order(self, n: int) -> int:
        if self.order % n != 0:
            raise ShapeMismatch(f"no root of order {n} mod {self.q}")
        return pow(self.root, self.order // n, self.q)

    def to_mont(self, x: int) -> np.uint64:
        return np.uint64(x * _R % self.q)

    # -- power-of-two row transforms -------------------------------------

    def _twiddles(self, length: int, inverse: bool) -> tuple[np.ndarray, np.ndarray]:
        key = (length, inverse)
        tab = self._tw.get(key)
        if tab is None:
            w = self.root_of_order(length)
            if inverse:
                w = inv_mod(w, self.q)
            tw = k.mont_geom(np.uint64(1), self.to_mont(w), max(length // 2, 1), self._qu, self._nq)
            tab = (tw, k.shoup_table(tw, self._qu))
            self._tw[key] = tab
        return tab

    def _scale(self, length: int) -> tuple[np.uint64, np.uint64]:
        s = self._scales.get(length)
        if s is None:
            inv = np.uint64(inv_mod(length, self.q))
            s = (inv, k.shoup_table(np.array([inv], dtype=np.uint64), self._qu)[0])
            self._scales[length] = s
        return s

    def bitrev(self, length: int) -> np.ndarray:
        perm = self._bitrev.get(length)
        if perm is None:
            bits = length.bit_length() - 1
            idx = np.arange(length, dtype=np.int64)
            perm = np.zeros(length, dtype=np.int64)
            for b in range(bits):
                perm = (perm << 1) | ((idx >> b) & 1)
            self._bitrev[length] = perm
        return perm

    def forward_rows(self, mat: np.ndarray) -> None:
        """Forward NTT of each row in place (power-of-two length, bit-reversed out)."""
        tw, twsh = self._twiddles(mat.shape[1], False)
        k.ntt_dif_rows(mat, tw, twsh, self._qu)
        _bump(mat.shape[0])

    def inverse_rows(self, mat: np.ndarray) -> None:
        """Inverse NTT of each row in place (bit-reversed in), including 1/L."""
        tw, twsh = self._twiddles(mat.shape[1], True)
        s, ssh = self._scale(mat.shape[1])
        k.ntt_dit_rows(mat, tw, twsh, self._qu, s, ssh)
        _bump(mat.shape[0])

    def pointwise(self, mat: np.ndarray, other_mont: np.ndarray) -> None:
        """mat *= other elementwise, other held in Montgomery form (exact)."""
        if other_mont.ndim == 1:
            k.pointwise_vec(mat, other_mont, self._qu, self._nq)
        else:
            k.pointwise_mat(mat, other_mont, self._qu, self._nq)

    def make_mont(self, arr: np.ndarray) -> None:
        """Convert residues to Montgomery form in place."""
        k.scale_rows(arr.reshape(1, -1), self._r2, self._qu, self._nq)

    def conv_rows(self, u_rows: np.ndarray, vhat_mont: np.ndarray) -> None:
        """Cyclic length-L convolution of every row with a cached spectrum."""
        self.forward_rows(u_rows)
        self.pointwise(u_rows, vhat_mont)
        self.inverse_rows(u_rows)

    # -- short / awkward cyclic lengths ----------------------------------

    def _small_matrix(self, e: int, inverse: bool) -> np.ndarray:
        key = (e, inverse)
        mat = self._small.get(key)
        if mat is None:
            w = self.root_of_order(e)
            if inverse:
                w = inv_mod(w, self.q)
            scale = inv_mod(e, self.q) if inverse else 1
            rows = [
                k.mont_geom(self.to_mont(scale), self.to_mont(pow(w, j, self.q)), e, self._qu, self._nq)
                for j in range(e)
            ]
            mat = np.ascontiguousarray(np.stack(rows))
            self._small[key] = mat
        return mat

    def _blu_cache(self, e: int, inverse: bool) -> dict:
        key = (e, inverse)
        cache = self._blu.get(key)
        if cache is None:
            chirp_order = e if e % 2 else 2 * e
            w = self.root_of_order(e)
            if inverse:
                w = inv_mod(w, self.q)
            xi = pow(w, (e + 1) // 2, self.q) if e % 2 else self.root_of_order(2 * e)
            if e % 2 == 0 and inverse:
                xi = inv_mod(xi, self.q)
            xi_mont_step = self.to_mont(xi)
            pows_plain = k.mont_geom(np.uint64(1), xi_mont_step, chirp_order, self._qu, self._nq)
            pows_mont = k.mont_geom(self._r_mod, xi_mont_step, chirp_order, self._qu, self._nq)
            sq = (np.arange(2 * e, dtype=np.int64) ** 2) % chirp_order
            neg = (chirp_order - sq) % chirp_order
            chirp_mont = np.ascontiguousarray(pows_mont[sq[:e]])
            out_mont = np.ascontiguousarray(pows_mont[sq[:e]])
            if inverse:
                k.scale_rows(out_mont.reshape(1, -1), self.to_mont(inv_mod(e, self.q)), self._qu, self._nq)
            length = _next_pow2(3 * e - 2)
            v = np.zeros((1, length), dtype=np.uint64)
            shifts = np.abs(np.arange(2 * e - 1, dtype=np.int64) - (e - 1))
            v[0, : 2 * e - 1] = pows_plain[neg[shifts]]
            self.forward_rows(v)
            self.make_mont(v)
            cache = {"chirp": chirp_mont, "out": out_mont, "vhat": v[0], "length": length}
            self._blu[key] = cache
        return cache

    def bluestein_rows(self, mat: np.ndarray, inverse: bool) -> np.ndarray:
        """DFT of each row at all e-th roots of unity via the chirp transform."""
        e = mat.shape[1]
        cache = self._blu_cache(e, inverse)
        work = np.zeros((mat.shape[0], cache["length"]), dtype=np.uint64)
        work[:, :e] = mat
        k.pointwise_vec(work[:, :e], cache["chirp"], self._qu, self._nq)
        self.conv_rows(work, cache["vhat"])
        out = np.ascontiguousarray(work[:, e - 1 : 2 * e - 1])
        k.pointwise_vec(out, cache["out"], self._qu, self._nq)
        return out

    def dft_axis(self, arr: np.ndarray, axis: int, inverse: bool, natural: bool = True) -> np.ndarray:
        """Transform one axis at all roots of that length.

        Short lengths use a direct root-power matrix (no data movement),
        power-of-two lengths the radix-2 kernels, anything else the chirp
        transform.  natural=False lets power-of-two axes stay in bit-reversed
        spectral order, which cancels between forward and inverse inside a
        convolution and saves the reordering passes.
        """
        length = arr.shape[axis]
        if length == 1:
            return arr
        if length <= 64:
            before = math.prod(arr.shape[:axis], start=1)
            after = math.prod(arr.shape[axis + 1 :], start=1)
            view = np.ascontiguousarray(arr).reshape(before, length, after)
            out = k.dft_matrix_mid(view, self._small_matrix(length, inverse), self._qu, self._nq)
            _bump(before * after)
            return out.reshape(arr.shape)
        if length & (length - 1) == 0:
            moved = np.moveaxis(arr, axis, -1)
            rows = np.ascontiguousarray(moved.reshape(-1, length))
            if inverse:
                if natural:
                    rows = np.ascontiguousarray(rows[:, self.bitrev(length)])
                self.inverse_rows(rows)
            else:
                self.forward_rows(rows)
                if natural:
                    rows = rows[:, self.bitrev(length)]
            return np.ascontiguousarray(np.moveaxis(rows.reshape(moved.shape), -1, axis))
        moved = np.moveaxis(arr, axis, -1)
        rows = np.ascontiguousarray(moved.reshape(-1, length))
        out = self.bluestein_rows(rows, inverse)
        return np.ascontiguousarray(np.moveaxis(out.reshape(moved.shape), -1, axis))


def _find_prime(modulus: int, below: int, window: int = 1 << 16) -> int:
    kk = (below - 2) // modulus
    for _ in range(window):
        if kk <= 0:
            break
        q = kk * modulus + 1
        if is_prime(q):
            return q
        kk -= 1
    raise NoPrimeFound(f"no prime = 1 mod {modulus} in window below {below}")


def _root_of_exact_order(q: int, m0: int, two_adic: int, cyclic_factor: int) -> int:
    primes = set(factorize(cyclic_factor).primes())
    if two_adic > 0:
        primes.add(2)
    h = 2
    while True:
        rho = pow(h, (q - 1) // m0, q)
        if rho != 1 and all(pow(rho, m0 // pi, q) != 1 for pi in primes):
            return rho
        h += 1


def find_ntt_prime(two_adic_len: int, cyclic_factor: int, bits: int = 62) -> NttPlan:
    """Largest prime q < 2^bits with q = 1 mod 2^a * cyclic_factor, 2^a >= two_adic_len."""
    a = (two_adic_len - 1).bit_length() if two_adic_len > 1 else 0
    m0 = (1 << a) * cyclic_factor
    if m0 >= 1 << bits:
        raise NoPrimeFound(f"modulus 2^{a} * {cyclic_factor} does not fit below 2^{bits}")
    q = _find_prime(m0, 1 << bits)
    return NttPlan(q, a, cyclic_factor, _root_of_exact_order(q, m0, a, cyclic_factor))


_GLOBAL_PLANS: tuple[NttPlan, NttPlan] | None = None


def umbrella_plans() -> tuple[NttPlan, NttPlan]:
    """The two fixed plans: largest primes below 2^62 with q = 1 mod 2^31."""
    global _GLOBAL_PLANS
    if _GLOBAL_PLANS is None:
        m0 = 1 << DEFAULT_TWO_ADIC
        q1 = _find_prime(m0, 1 << 62)
        q2 = _find_prime(m0, q1)
        _GLOBAL_PLANS = (
            NttPlan(q1, DEFAULT_TWO_ADIC, 1, _root_of_exact_order(q1, m0, DEFAULT_TWO_ADIC, 1)),
            NttPlan(q2, DEFAULT_TWO_ADIC, 1, _root_of_exact_order(q2, m0, DEFAULT_TWO_ADIC, 1)),
        )
    return _GLOBAL_PLANS


def transform(plan: NttPlan, data, shape: ConvShape, direction: str) -> np.ndarray:
    """Multi-dimensional DFT over F_q on the storage grid described by shape.

    Zero-padded dimensions must already be at their power-of-two transform
    length; cyclic dimensions may be any length whose roots exist in the
    plan.  inverse(forward(x)) == x, the 1/N scaling included.
    """
    if direction not in ("forward", "inverse"):
        raise ValueError(f"bad direction {direction!r}")
    arr = np.asarray(data, dtype=np.uint64)
    lengths = ConvShape(shape.dims).lengths() if not isinstance(shape, ConvShape) else shape.lengths()
    if arr.size != math.prod(lengths):
        raise ShapeMismatch(f"data size {arr.size} != shape size {math.prod(lengths)}")
    for length, kind in shape.dims:
        if kind == ZERO_PADDED and length & (length - 1):
            raise ShapeMismatch(f"zero-padded dimension {length} is not a power of two")
    arr = arr.reshape(lengths).copy()
    inverse = direction == "inverse"
    for axis in range(len(lengths)):
        arr = plan.dft_axis(arr, axis, inverse)
    return arr.reshape(-1)


def convolve_multidim(plan: NttPlan, a, b, shape: ConvShape) -> np.ndarray:
    """Exact convolution mod q: cyclic wrap in cyclic dimensions, full
    (acyclic) product in zero-padded ones, whose output length is 2L-1."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    lengths = shape.lengths()
    if a.size != math.prod(lengths) or b.size != math.prod(lengths):
        raise ShapeMismatch("input size does not match shape")
    a = a.reshape(lengths)
    b = b.reshape(lengths)
    storage = tuple(
        _next_pow2(2 * length - 1) if kind == ZERO_PADDED else length
        for length, kind in shape.dims
    )
    wa = np.zeros(storage, dtype=np.uint64)
    wb = np.zeros(storage, dtype=np.uint64)
    wa[tuple(slice(0, n) for n in lengths)] = a
    wb[tuple(slice(0, n) for n in lengths)] = b
    for axis in range(len(storage)):
        wa = plan.dft_axis(wa, axis, False)
        wb = plan.dft_axis(wb, axis, False)
    wa = np.ascontiguousarray(wa)
    wb = np.ascontiguousarray(wb)
    plan.make_mont(wb)
    plan.pointwise(wa.reshape(1, -1), wb.reshape(1, -1))
    for axis in range(len(storage)):
        wa = plan.dft_axis(wa, axis, True)
    out = tuple(
        slice(0, 2 * length - 1 if kind == ZERO_PADDED else length)
        for length, kind in shape.dims
    )
    return np.ascontiguousarray(wa[out])


@dataclass
class SignedCoeffs:
    """Signed integer coefficients with a declared bound on absolute value."""

    coefficients: list[int]
    bound: int

    def __post_init__(self):
        if any(abs(c) > self.bound for c in self.coefficients):
            raise ValueError("coefficient exceeds declared bound")

    def __len__(self):
        return len(self.coefficients)


def _signed_mod(values, q: int) -> np.ndarray:
    """Reduce signed ints (list or array) into [0, q) as uint64."""
    if isinstance(values, np.ndarray) and values.dtype != object:
        return (values.astype(np.int64) % q).astype(np.uint64)
    if all(-(1 << 62) < int(v) < (1 << 62) for v in values):
        return (np.asarray([int(v) for v in values], dtype=np.int64) % q).astype(np.uint64)
    return np.array([int(v) % q for v in values], dtype=np.uint64)


def _lift_centered(arr: np.ndarray, q: int) -> np.ndarray:
    out = arr.astype(np.int64)
    out[arr > q // 2] -= q
    return out


def _conv_1d(plan: NttPlan, a_mod: np.ndarray, b_mod: np.ndarray, out_len: int) -> np.ndarray:
    length = _next_pow2(out_len)
    wa = np.zeros((1, length), dtype=np.uint64)
    wb = np.zeros((1, length), dtype=np.uint64)
    wa[0, : a_mod.size] = a_mod
    wb[0, : b_mod.size] = b_mod
    plan.forward_rows(wb)
    plan.make_mont(wb)
    plan.conv_rows(wa, wb[0])
    return wa[0, :out_len]


def poly_mul_integer(a: SignedCoeffs, b: SignedCoeffs, out_bound: int) -> SignedCoeffs:
    """Exact product in Z[X]: one NTT prime when 2*out_bound < q, else two + CRT."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("empty polynomial")
    p1, p2 = umbrella_plans()
    if out_bound >= p1.q * p2.q // 2:
        raise BoundOverflow(f"bound {out_bound} needs more than two word primes")
    out_len = len(a) + len(b) - 1
    if 2 * out_bound < p1.q:
        w = _conv_1d(p1, _signed_mod(a.coefficients, p1.q), _signed_mod(b.coefficients, p1.q), out_len)
        coeffs = _lift_centered(w, p1.q).tolist()
    else:
        w1 = _conv_1d(p1, _signed_mod(a.coefficients, p1.q), _signed_mod(b.coefficients, p1.q), out_len)
        w2 = _conv_1d(p2, _signed_mod(a.coefficients, p2.q), _signed_mod(b.coefficients, p2.q), out_len)
        coeffs = [crt_pair(int(r1), int(r2)) for r1, r2 in zip(w1, w2)]
    return SignedCoeffs(coeffs, out_bound)


def crt_pair(r1: int, r2: int) -> int:
    """The unique x in (-q1*q2/2, q1*q2/2] with x = r1 mod q1, x = r2 mod q2."""
    p1, p2 = umbrella_plans()
    q1, q2 = p1.q, p2.q
    t = (r2 - r1) * inv_mod(q1 % q2, q2) % q2
    x = r1 + q1 * t
    if x > q1 * q2 // 2:
        x -= q1 * q2
    return x


def _rows_modp(plans: list[NttPlan], ws: list[np.ndarray], p: int) -> np.ndarray:
    """Centered-lift convolution residues (per word prime) and reduce mod p.

    With two primes the CRT combination x = w1 + q1*t is folded directly into
    arithmetic mod p; the sign test t > q2/2 is exact because the true values
    are far smaller than q1*q2/2.
    """
    pu = np.uint64(p)
    shape = ws[0].shape
    flat = [w.reshape(shape[0], -1) for w in ws]
    if len(plans) == 1:
        out = k.lift_rows_modp(flat[0], plans[0]._qu, pu)
    else:
        q1, q2 = plans[0].q, plans[1].q
        c = np.uint64(inv_mod(q1 % q2, q2))
        csh = k.shoup_table(np.array([c], dtype=np.uint64), plans[1]._qu)[0]
        out = k.crt_rows_modp(flat[0], flat[1], plans[0]._qu, plans[1]._qu, c, csh, pu)
    return out.reshape(shape)


class RowConvolver:
    """Cached-spectrum 1-D convolutions of signed rows, reduced mod p.

    The second factor V is fixed at construction (transformed once per word
    prime and held in Montgomery form); run() convolves each row of U with V
    and returns the first out_len coefficients of the integer product mod p.
    """

    def __init__(self, plans: list[NttPlan], v_lift: np.ndarray, u_len: int, out_len: int):
        self.plans = plans
        self.u_len = u_len
        self.out_len = out_len
        self.length = _next_pow2(u_len + v_lift.size - 1)
        if out_len > self.length:
            raise ShapeMismatch("out_len exceeds transform length")
        self.vhats = []
        for plan in plans:
            row = np.zeros((1, self.length), dtype=np.uint64)
            row[0, : v_lift.size] = _signed_mod(v_lift, plan.q)
            plan.forward_rows(row)
            plan.make_mont(row)
            self.vhats.append(row[0])

    def run(self, u_rows: np.ndarray, p: int) -> np.ndarray:
        ws = []
        for plan, vhat in zip(self.plans, self.vhats):
            w = k.pad_mod_rows(u_rows, self.length, plan._qu)
            plan.conv_rows(w, vhat)
            ws.append(np.ascontiguousarray(w[:, : self.out_len]))
        return _rows_modp(self.plans, ws, p)


class GridConvolver:
    """Cached-spectrum convolution over (zero-padded) x (cyclic...) grids, mod p.

    dims = (D, e1, ..., ek): the first dimension is zero-padded (output length
    2D-1), the rest wrap cyclically.  V is fixed at construction; run() takes
    a batch of signed U grids.
    """

    def __init__(self, plans: list[NttPlan], v_lift: np.ndarray, dims: tuple[int, ...]):
        self.plans = plans
        self.dims = dims
        self.storage = (_next_pow2(2 * dims[0] - 1),) + dims[1:]
        self.vhats = []
        for plan in plans:
            v = np.zeros(self.storage, dtype=np.uint64)
            v[tuple(slice(0, d) for d in dims)] = _signed_mod_2d(v_lift, plan.q).reshape(dims)
            for axis in range(len(dims)):
                v = plan.dft_axis(v, axis, False, natural=False)
            v = np.ascontiguousarray(v)
            plan.make_mont(v)
            self.vhats.append(v.reshape(-1))

    def run(self, u_batch: np.ndarray, p: int) -> np.ndarray:
        """u_batch: (rows,) + dims signed; returns (rows, 2D-1) + cyclic dims mod p."""
        rows = u_batch.shape[0]
        out_len = 2 * self.dims[0] - 1
        ws = []
        for plan, vhat in zip(self.plans, self.vhats):
            w = np.zeros((rows,) + self.storage, dtype=np.uint64)
            w[(slice(None),) + tuple(slice(0, d) for d in self.dims)] = _signed_mod_2d(
                u_batch.reshape(rows, -1), plan.q
            ).reshape(u_batch.shape)
            for axis in range(1, len(self.storage) + 1):
                w = plan.dft_axis(w, axis, False, natural=False)
            w = np.ascontiguousarray(w)
            plan.pointwise(w.reshape(rows, -1), vhat)
            for axis in range(1, len(self.storage) + 1):
                w = plan.dft_axis(w, axis, True, natural=False)
            ws.append(np.ascontiguousarray(w[:, :out_len]))
        return _rows_modp(self.plans, ws, p)


def _signed_mod_2d(arr: np.ndarray, q: int) -> np.ndarray:
    """Reduce a signed integer array into [0, q) as uint64 (q < 2^62)."""
    return np.remainder(arr.astype(np.int64), np.int64(q)).astype(np.uint64)
