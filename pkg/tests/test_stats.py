import math

import pytest

from bernmodp.stats import (
    EmptyInput,
    MalformedFile,
    build_report,
    chi_square_sf,
    chi_square_stat,
    poisson_mass,
)

TABLE2_COUNTS = [63751120, 31873681, 7963496, 1326171, 165211, 16410, 1384, 86, 4, 1]
TABLE2_P = [
    0.606531, 0.303265, 0.075816, 0.0126361, 0.00157951,
    0.000157951, 0.000013163, 0.000000940, 0.0000000588, 0.0000000033,
]
TABLE3 = [
    (4.654, 0.589), (10.559, 0.103), (6.472, 0.372), (3.209, 0.782),
    (3.099, 0.796), (8.530, 0.202), (4.025, 0.673), (5.819, 0.444),
    (1.908, 0.927), (4.657, 0.588), (12.850, 0.045), (5.972, 0.426),
    (4.538, 0.604), (1.612, 0.952), (6.765, 0.343), (4.716, 0.580),
]


def test_poisson_mass_printed_digits():
    for m, want in enumerate(TABLE2_P):
        digits = len(str(want).split(".")[1])
        assert abs(poisson_mass(m) - want) <= 0.5 * 10**-digits, m


def test_poisson_mass_sums_to_one():
    assert abs(sum(poisson_mass(m) for m in range(65)) - 1.0) < 1e-12


def test_chi_square_stat_table2():
    x, dof = chi_square_stat(TABLE2_COUNTS, 7)
    assert dof == 7
    assert abs(x - 13.807) <= 0.001


def test_chi_square_stat_perfect_fit():
    n = 10**7
    counts = [round(poisson_mass(m) * n) for m in range(20)]
    x, _ = chi_square_stat(counts, 7)
    assert x < 0.01


def test_chi_square_stat_perturbation():
    base = [6000, 3000, 800, 150, 40, 8, 1, 1]
    x0, _ = chi_square_stat(base, 4)
    bumped = list(base)
    bumped[2] += 5
    x1, _ = chi_square_stat(bumped, 4)
    assert x1 != x0


def test_chi_square_stat_empty():
    with pytest.raises(EmptyInput):
        chi_square_stat([], 7)
    with pytest.raises(EmptyInput):
        chi_square_stat([0, 0], 2)


def test_chi_square_sf_values():
    assert abs(chi_square_sf(13.807, 7) - 0.0547) <= 0.0005
    for x, want in TABLE3:
        assert abs(chi_square_sf(x, 6) - want) <= 0.001, x


def test_chi_square_sf_analytic_dof2():
    for x in (0.1, 1.0, 10.0):
        assert abs(chi_square_sf(x, 2) - math.exp(-x / 2)) < 1e-10


def test_chi_square_sf_monotone_and_bounds():
    for dof in (1, 2, 7, 64):
        assert chi_square_sf(0.0, dof) == 1.0
        prev = 1.0
        for x in (0.5, 1, 2, 5, 10, 20, 50, 100):
            cur = chi_square_sf(x, dof)
            assert 0.0 <= cur <= prev
            prev = cur


def test_build_report_roundtrip(tmp_path):
    path = tmp_path / "results.txt"
    lines = ["#irregular-scan v1 from=5 to=1000"]
    lines += ["37:32", "59:44", "157:62,110"]
    lines += ["#hist 0=165 1=2 2=1", "#summary primes=168 irregular=3 checksum_fail=0"]
    path.write_text("\n".join(lines) + "\n")
    rep = build_report(str(path), bucket_cap=2)
    assert rep.n_primes == 168
    assert rep.counts == [165, 2, 1]
    assert rep.lo == 5 and rep.hi == 1000
    assert sum(rep.observed) == 168
    assert abs(sum(rep.expected) - 168) < 1e-9


def test_build_report_intervals(tmp_path):
    path = tmp_path / "results.txt"
    lines = ["#irregular-scan v1 from=5 to=199", "37:32", "59:44", "101:68", "103:24",
             "131:22", "149:130", "157:62,110", "67:58",
             "#summary primes=44 irregular=8 checksum_fail=0"]
    path.write_text("\n".join(lines) + "\n")
    rep = build_report(str(path), bucket_cap=2, interval_width=100)
    assert len(rep.intervals) == 2
    assert sum(sub.n_primes for sub in rep.intervals) == 44
    assert rep.intervals[0].dof == 6


def test_build_report_malformed(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    with pytest.raises(MalformedFile):
        build_report(str(empty))
    partial = tmp_path / "partial.txt"
    partial.write_text("#irregular-scan v1 from=5 to=10\n")
    with pytest.raises(MalformedFile):
        build_report(str(partial))
