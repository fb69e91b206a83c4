import time

import pytest

from bernmodp.cli import ScanConfig, cmd_scan


@pytest.fixture(scope="session")
def scan_100k(tmp_path_factory):
    """Full scan of 5..100000 with both output files; shared across tests."""
    base = tmp_path_factory.mktemp("scan100k")
    out, aux = str(base / "results.txt"), str(base / "aux.txt")
    t0 = time.perf_counter()
    code = cmd_scan(ScanConfig(start=5, stop=100_000, jobs=2, out=out, aux=aux))
    return {"out": out, "aux": aux, "seconds": time.perf_counter() - t0, "exit": code}


@pytest.fixture(scope="session")
def scan_1m(tmp_path_factory):
    """Full scan of the primes below 10^6 (the big one; used by acceptance)."""
    base = tmp_path_factory.mktemp("scan1m")
    out, aux = str(base / "results.txt"), str(base / "aux.txt")
    t0 = time.perf_counter()
    code = cmd_scan(ScanConfig(start=5, stop=999_999, jobs=2, out=out, aux=aux))
    return {"out": out, "aux": aux, "seconds": time.perf_counter() - t0, "exit": code}
