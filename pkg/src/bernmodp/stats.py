"""Poisson-fit analysis of irregularity indices.

The index of irregularity is modelled as Poisson with parameter 1/2; the
goodness-of-fit statistic folds the sparse tail into one bucket whose
expectation is taken as the complement, so expectations sum exactly to the
number of primes.  Tail probabilities come from the regularized upper
incomplete gamma function, evaluated by series or continued fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import primes_in_range


class MalformedFile(ValueError):
    """Results file is empty or does not match the scan format."""


class EmptyInput(ValueError):
    """No observations to test."""


def poisson_mass(m: int) -> float:
    """P_m = e^(-1/2) / (2^m m!)."""
    if not 0 <= m <= 64:
        raise ValueError("m out of range")
    return math.exp(-0.5) / (2**m * math.factorial(m))


def chi_square_stat(observed, bucket_cap: int = 7) -> tuple[float, int]:
    """Goodness-of-fit statistic against Poisson(1/2), folding m >= cap together.

    Buckets 0..cap-1 use E_m = P_m * N; the last bucket pairs the observed
    tail with E = N - sum of the other expectations.  Returns (X, dof) with
    dof = bucket_cap.
    """
    observed = list(observed)
    if not observed or bucket_cap < 1:
        raise EmptyInput("no counts")
    n = sum(observed)
    if n == 0:
        raise EmptyInput("no observations")
    x = 0.0
    head_mass = 0.0
    for m in range(bucket_cap):
        e = poisson_mass(m) * n
        o = observed[m] if m < len(observed) else 0
        x += (o - e) ** 2 / e
        head_mass += poisson_mass(m)
    o_tail = sum(observed[bucket_cap:])
    e_tail = (1.0 - head_mass) * n
    x += (o_tail - e_tail) ** 2 / e_tail
    return x, bucket_cap


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized incomplete gamma by power series (x < a + 1)."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    """Upper regularized incomplete gamma by Lentz continued fraction (x >= a + 1)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def chi_square_sf(x: float, dof: int) -> float:
    """P(X >= x) for a chi-square variable with dof degrees of freedom."""
    if not 1 <= dof <= 64:
        raise ValueError("dof out of range")
    if x < 0:
        raise ValueError("negative statistic")
    if x == 0:
        return 1.0
    a = dof / 2.0
    xx = x / 2.0
    if xx < a + 1.0:
        return min(max(1.0 - _gamma_p_series(a, xx), 0.0), 1.0)
    return min(max(_gamma_q_contfrac(a, xx), 0.0), 1.0)


@dataclass
class StatsReport:
    n_primes: int
    counts: list[int]  # N_m, m = 0.., from the scanned range
    observed: list[float]
    expected: list[float]
    x: float
    dof: int
    p_value: float
    lo: int = 0
    hi: int = 0
    intervals: list["StatsReport"] = field(default_factory=list)


def _report_from_counts(counts, n, bucket_cap, lo, hi) -> StatsReport:
    x, dof = chi_square_stat(counts, bucket_cap)
    observed = [float(counts[m]) if m < len(counts) else 0.0 for m in range(bucket_cap)]
    observed.append(float(sum(counts[bucket_cap:])))
    expected = [poisson_mass(m) * n for m in range(bucket_cap)]
    expected.append(n - sum(expected))
    return StatsReport(
        n_primes=n,
        counts=list(counts),
        observed=observed,
        expected=expected,
        x=x,
        dof=dof,
        p_value=chi_square_sf(x, dof),
        lo=lo,
        hi=hi,
    )


def parse_results(path) -> tuple[int, int, int, dict[int, int]]:
    """Read a results file: (from, to, total primes, {p: index count})."""
    lo = hi = None
    total = None
    per_prime: dict[int, int] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#irregular-scan"):
                fields = dict(part.split("=") for part in line.split()[2:])
                lo, hi = int(fields["from"]), int(fields["to"])
            elif line.startswith("#summary"):
                fields = dict(part.split("=") for part in line.split()[1:])
                total = int(fields["primes"])
            elif line.startswith("#"):
                continue
            else:
                p_str, r_str = line.split(":")
                per_prime[int(p_str)] = len(r_str.split(","))
    if lo is None or total is None:
        raise MalformedFile(f"{path} is not a complete scan results file")
    return lo, hi, total, per_prime


def build_report(path, bucket_cap: int = 7, interval_width: int | None = None) -> StatsReport:
    """Histogram the indices of irregularity from a scan and test the fit."""
    lo, hi, total, per_prime = parse_results(path)
    max_m = max(per_prime.values(), default=0)
    counts = [0] * (max_m + 1)
    for m in per_prime.values():
        counts[m] += 1
    counts[0] = total - sum(counts[1:])
    report = _report_from_counts(counts, total, bucket_cap, lo, hi)
    if interval_width:
        sub_cap = 6
        for j in range(lo // interval_width, hi // interval_width + 1):
            a = max(lo, j * interval_width)
            b = min(hi, (j + 1) * interval_width - 1)
            primes = primes_in_range(a, b)
            if primes.size == 0:
                continue
            sub_counts = [0] * (max_m + 1)
            hits = 0
            for p, m in per_prime.items():
                if a <= p <= b:
                    sub_counts[m] += 1
                    hits += 1
            sub_counts[0] = primes.size - hits
            report.intervals.append(_report_from_counts(sub_counts, int(primes.size), sub_cap, a, b))
    return report
