"""Command-line interface: range scanning, verification and statistics.

Results file (line oriented, greppable):
    #irregular-scan v1 from=<a> to=<b>
    <p>:<r1>,<r2>,...          one line per irregular prime, r ascending
    #hist 0=<N0> 1=<N1> ...    counts per index of irregularity
    #summary primes=<N> irregular=<K> checksum_fail=<F>

Aux file: "p r residue" lines, the stored smallest-residue pairs per prime,
ten per prime (fewer only for tiny p), same order as stored.

Scans are deterministic: output bytes do not depend on --jobs, and a scan
interrupted mid-range resumes from the last completed prime.
"""

from __future__ import annotations

import argparse
import multiprocessing
import os
import sys
from dataclasses import dataclass

from . import stats as stats_mod
from .arith import primes_in_range
from .checks import bernoulli_single, iwasawa_check, audit_record
from .pipeline import STRATEGIES, IrregularRecord, compute_irregular

USAGE_EXIT = 2
FAIL_EXIT = 1


@dataclass
class ScanConfig:
    start: int
    stop: int
    jobs: int = 1
    out: str = "results.txt"
    aux: str = "aux.txt"
    force_strategy: str | None = None

    def __post_init__(self):
        if not 5 <= self.start <= self.stop < 1 << 31:
            raise ValueError("need 5 <= from <= to < 2^31")
        if self.force_strategy is not None and self.force_strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.force_strategy!r}")


def _pair_count(p: int) -> int:
    return min(10, (p - 3) // 2)


def _scan_worker(args) -> tuple:
    p, force = args
    rec = compute_irregular(p, force_strategy=force)
    return (p, rec.strategy, rec.fallback, rec.irregular, rec.ten_pairs, rec.checksum_ok)


def _resume_point(cfg: ScanConfig, header: str) -> int:
    """Last prime with a complete aux group, or 0; rewrites both files to end there."""
    if not (os.path.exists(cfg.out) and os.path.exists(cfg.aux)):
        return 0
    with open(cfg.out) as fh:
        out_lines = fh.read().splitlines()
    if not out_lines or out_lines[0] != header or any(l.startswith("#summary") for l in out_lines):
        return 0
    with open(cfg.aux) as fh:
        aux_lines = fh.read().splitlines()
    if not aux_lines:
        return 0
    groups: dict[int, int] = {}
    order: list[int] = []
    for line in aux_lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            break
        p = int(parts[0])
        if p not in groups:
            groups[p] = 0
            order.append(p)
        groups[p] += 1
    while order and groups[order[-1]] != _pair_count(order[-1]):
        del groups[order.pop()]
    if not order:
        return 0
    last = order[-1]
    with open(cfg.out, "w") as fh:
        fh.write(header + "\n")
        for line in out_lines[1:]:
            if line.startswith("#") or int(line.split(":")[0]) > last:
                continue
            fh.write(line + "\n")
    with open(cfg.aux, "w") as fh:
        fh.write(aux_lines[0] + "\n")
        for line in aux_lines[1:]:
            parts = line.split()
            if len(parts) != 3 or int(parts[0]) > last:
                break
            fh.write(line + "\n")
    return last


def cmd_scan(cfg: ScanConfig) -> int:
    """Process every prime in [from, to]; write results + aux, return exit code."""
    header = f"#irregular-scan v1 from={cfg.start} to={cfg.stop}"
    aux_header = f"#irregular-aux v1 from={cfg.start} to={cfg.stop}"
    resume_from = _resume_point(cfg, header)
    primes = [int(p) for p in primes_in_range(cfg.start, cfg.stop) if p > resume_from]

    hist: dict[int, int] = {}
    strategies: dict[str, int] = {}
    n_primes = n_irregular = n_fail = n_fallback = 0

    mode = "a" if resume_from else "w"
    out = open(cfg.out, mode)
    aux = open(cfg.aux, mode)
    if not resume_from:
        out.write(header + "\n")
        aux.write(aux_header + "\n")

    def consume(result) -> None:
        nonlocal n_primes, n_irregular, n_fail, n_fallback
        p, strategy, fallback, irregular, pairs, checksum_ok = result
        n_primes += 1
        strategies[strategy] = strategies.get(strategy, 0) + 1
        n_fallback += fallback
        hist[len(irregular)] = hist.get(len(irregular), 0) + 1
        if irregular:
            n_irregular += 1
            out.write(f"{p}:{','.join(str(r) for r in irregular)}\n")
        if not checksum_ok:
            n_fail += 1
            print(f"checksum failure at p={p}", file=sys.stderr)
        aux.write("".join(f"{p} {r} {res}\n" for r, res in pairs))

    try:
        work = [(p, cfg.force_strategy) for p in primes]
        if cfg.jobs > 1:
            with multiprocessing.Pool(cfg.jobs) as pool:
                for result in pool.imap(_scan_worker, work, chunksize=8):
                    consume(result)
        else:
            for item in work:
                consume(_scan_worker(item))
        # resumed scans recount the already-written part for the footer
        if resume_from:
            done = _recount(cfg.out, cfg.aux, resume_from)
            n_primes += done[0]
            n_irregular += done[1]
            for m, c in done[2].items():
                hist[m] = hist.get(m, 0) + c
        if hist:
            out.write("#hist " + " ".join(f"{m}={hist[m]}" for m in sorted(hist)) + "\n")
        out.write(f"#summary primes={n_primes} irregular={n_irregular} checksum_fail={n_fail}\n")
    finally:
        out.close()
        aux.close()

    strat_text = " ".join(f"{s}={strategies.get(s, 0)}" for s in STRATEGIES)
    print(
        f"scanned {n_primes} primes, {n_irregular} irregular; "
        f"strategies: {strat_text}; fallbacks={n_fallback}; checksum failures={n_fail}",
        file=sys.stderr,
    )
    return FAIL_EXIT if n_fail else 0


def _recount(out_path: str, aux_path: str, upto: int) -> tuple[int, int, dict[int, int]]:
    """Histogram of the part of a resumed scan that was already on disk."""
    irregular: dict[int, int] = {}
    with open(out_path) as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            p, rs = line.split(":")
            if int(p) <= upto:
                irregular[int(p)] = len(rs.strip().split(","))
    seen: set[int] = set()
    with open(aux_path) as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            parts = line.split()
            if parts and int(parts[0]) <= upto:
                seen.add(int(parts[0]))
    hist: dict[int, int] = {}
    for p in seen:
        m = irregular.get(p, 0)
        hist[m] = hist.get(m, 0) + 1
    return len(seen), len(irregular), hist


def _read_aux(path: str) -> dict[int, list[tuple[int, int]]]:
    groups: dict[int, list[tuple[int, int]]] = {}
    with open(path) as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            p, r, res = (int(x) for x in line.split())
            groups.setdefault(p, []).append((r, res))
    return groups


def _audit_worker(item) -> tuple[int, bool]:
    p, pairs = item
    rec = IrregularRecord(
        p=p, strategy="", fallback=False, irregular=(), ten_pairs=tuple(pairs), checksum_ok=True
    )
    return p, audit_record(rec)


def cmd_verify(results_path: str, aux_path: str, jobs: int = 1) -> int:
    """Recompute every stored pair via the single-index oracle."""
    for path in (results_path, aux_path):
        if not os.path.exists(path):
            print(f"missing file: {path}", file=sys.stderr)
            return USAGE_EXIT
    irregular_lines: dict[int, list[int]] = {}
    with open(results_path) as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            p, rs = line.split(":")
            irregular_lines[int(p)] = [int(r) for r in rs.split(",")]
    groups = _read_aux(aux_path)
    failures = []
    items = sorted(groups.items())
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.imap(_audit_worker, items, chunksize=4)
            for p, ok in results:
                if not ok:
                    failures.append((p, "audit"))
    else:
        for item in items:
            p, ok = _audit_worker(item)
            if not ok:
                failures.append((p, "audit"))
    for p, pairs in items:
        stored_zero = sorted(r for r, res in pairs if res == 0)
        if stored_zero != sorted(irregular_lines.get(p, [])):
            failures.append((p, "results/aux mismatch"))
    for p, what in sorted(failures):
        print(f"verification failed at p={p}: {what}", file=sys.stderr)
    print(f"verified {len(items)} records, {len(failures)} failures", file=sys.stderr)
    return FAIL_EXIT if failures else 0


def cmd_single(p: int) -> int:
    rec = compute_irregular(p)
    status = "irregular" if rec.irregular else "regular"
    indices = ",".join(str(r) for r in rec.irregular)
    print(
        f"p={p} {status} i={rec.i_p} indices={indices} "
        f"strategy={rec.strategy} checksum={'ok' if rec.checksum_ok else 'FAIL'}"
    )
    return 0 if rec.checksum_ok else FAIL_EXIT


def cmd_pair(p: int, r: int) -> int:
    print(bernoulli_single(p, r))
    return 0


def cmd_iwasawa(p: int, r: int) -> int:
    rep = iwasawa_check(p, r)
    extra = (" " + " ".join(rep.failed())) if rep.failed() else ""
    print(f"{rep.verdict}{extra} s={rep.s} t={rep.t}")
    return 0


def cmd_stats(results_path: str, bucket_cap: int = 7, interval_width: int | None = None) -> int:
    if not os.path.exists(results_path):
        print(f"missing file: {results_path}", file=sys.stderr)
        return USAGE_EXIT
    rep = stats_mod.build_report(results_path, bucket_cap, interval_width)
    print(f"primes={rep.n_primes} range=[{rep.lo},{rep.hi}]")
    print(f"{'m':>3} {'N_m':>12} {'N_m/N':>12} {'P_m':>12}")
    for m, c in enumerate(rep.counts):
        print(f"{m:>3} {c:>12} {c / rep.n_primes:>12.7f} {stats_mod.poisson_mass(m):>12.7f}")
    print(f"X = {rep.x:.3f}  dof = {rep.dof}  p-value = {rep.p_value:.4f}")
    for sub in rep.intervals:
        print(
            f"  [{sub.lo},{sub.hi}] primes={sub.n_primes} "
            f"X={sub.x:.3f} p-value={sub.p_value:.4f}"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernmodp", description="irregular prime scanner and verifier"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="scan a prime range for irregular indices")
    scan.add_argument("--from", dest="start", type=int, required=True)
    scan.add_argument("--to", dest="stop", type=int, required=True)
    scan.add_argument("--jobs", type=int, default=1)
    scan.add_argument("--out", default="results.txt")
    scan.add_argument("--aux", default="aux.txt")
    scan.add_argument("--force-strategy", choices=STRATEGIES, default=None)

    verify = sub.add_parser("verify", help="re-audit stored ten-pair records")
    verify.add_argument("--results", required=True)
    verify.add_argument("--aux", required=True)
    verify.add_argument("--jobs", type=int, default=1)

    single = sub.add_parser("single", help="full pipeline for one prime")
    single.add_argument("p", type=int)

    pair = sub.add_parser("pair", help="B_r mod p by the O(p) oracle")
    pair.add_argument("p", type=int)
    pair.add_argument("r", type=int)

    iwa = sub.add_parser("iwasawa", help="Iwasawa-invariant criterion for a pair")
    iwa.add_argument("p", type=int)
    iwa.add_argument("r", type=int)

    st = sub.add_parser("stats", help="index-of-irregularity statistics")
    st.add_argument("--results", required=True)
    st.add_argument("--bucket-cap", type=int, default=7)
    st.add_argument("--interval-width", type=int, default=None)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "scan":
            cfg = ScanConfig(
                start=args.start,
                stop=args.stop,
                jobs=args.jobs,
                out=args.out,
                aux=args.aux,
                force_strategy=args.force_strategy,
            )
            return cmd_scan(cfg)
        if args.command == "verify":
            return cmd_verify(args.results, args.aux, args.jobs)
        if args.command == "single":
            return cmd_single(args.p)
        if args.command == "pair":
            return cmd_pair(args.p, args.r)
        if args.command == "iwasawa":
            return cmd_iwasawa(args.p, args.r)
        if args.command == "stats":
            return cmd_stats(args.results, args.bucket_cap, args.interval_width)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    return USAGE_EXIT  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
