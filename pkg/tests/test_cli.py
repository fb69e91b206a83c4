import os

import pytest

from bernmodp.cli import ScanConfig, cmd_scan, cmd_verify, main

CLASSICAL_UNDER_200 = {
    37: [32], 59: [44], 67: [58], 101: [68],
    103: [24], 131: [22], 149: [130], 157: [62, 110],
}


def run_scan(tmp_path, name, **kwargs):
    out = str(tmp_path / f"{name}.txt")
    aux = str(tmp_path / f"{name}-aux.txt")
    code = cmd_scan(ScanConfig(out=out, aux=aux, **kwargs))
    return code, out, aux


def test_scan_classical_range(tmp_path):
    code, out, aux = run_scan(tmp_path, "r200", start=5, stop=200)
    assert code == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "#irregular-scan v1 from=5 to=200"
    payload = [l for l in lines if not l.startswith("#")]
    got = {int(l.split(":")[0]): [int(r) for r in l.split(":")[1].split(",")] for l in payload}
    assert got == CLASSICAL_UNDER_200
    assert lines[-1] == "#summary primes=44 irregular=8 checksum_fail=0"
    assert any(l.startswith("#hist 0=36 1=7 2=1") for l in lines)


def test_scan_determinism_across_jobs(tmp_path):
    _, out1, aux1 = run_scan(tmp_path, "j1", start=5, stop=500, jobs=1)
    _, out2, aux2 = run_scan(tmp_path, "j2", start=5, stop=500, jobs=2)
    assert open(out1).read() == open(out2).read()
    assert open(aux1).read() == open(aux2).read()


def test_scan_empty_range(tmp_path):
    code, out, aux = run_scan(tmp_path, "empty", start=24, stop=28)
    assert code == 0
    lines = open(out).read().splitlines()
    assert lines == [
        "#irregular-scan v1 from=24 to=28",
        "#summary primes=0 irregular=0 checksum_fail=0",
    ]


def test_scan_forced_umbrella_byte_identical(tmp_path):
    _, out1, aux1 = run_scan(tmp_path, "dflt", start=5, stop=2000, jobs=2)
    _, out2, aux2 = run_scan(
        tmp_path, "umb", start=5, stop=2000, jobs=2, force_strategy="umbrella"
    )
    assert open(out1).read() == open(out2).read()
    assert open(aux1).read() == open(aux2).read()


def test_scan_resume(tmp_path):
    _, full_out, full_aux = run_scan(tmp_path, "full", start=5, stop=400)
    # simulate an interrupted scan: keep the first 60 aux lines (plus header),
    # cutting mid-way through some prime's group
    out = str(tmp_path / "part.txt")
    aux = str(tmp_path / "part-aux.txt")
    full_out_lines = open(full_out).read().splitlines()
    full_aux_lines = open(full_aux).read().splitlines()
    cut_aux = full_aux_lines[:61]
    last_full_p = int(cut_aux[-1].split()[0])
    with open(aux, "w") as fh:
        fh.write("\n".join(cut_aux) + "\n")
    with open(out, "w") as fh:
        fh.write(full_out_lines[0] + "\n")
        for line in full_out_lines[1:]:
            if line.startswith("#"):
                continue
            if int(line.split(":")[0]) <= last_full_p:
                fh.write(line + "\n")
    code = cmd_scan(ScanConfig(start=5, stop=400, out=out, aux=aux))
    assert code == 0
    assert open(out).read() == open(full_out).read()
    assert open(aux).read() == open(full_aux).read()


def test_scan_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(start=3, stop=100)
    with pytest.raises(ValueError):
        ScanConfig(start=100, stop=5)
    with pytest.raises(ValueError):
        ScanConfig(start=5, stop=1 << 31)
    with pytest.raises(ValueError):
        ScanConfig(start=5, stop=100, force_strategy="fast")


def test_verify_command(tmp_path):
    _, out, aux = run_scan(tmp_path, "v", start=5, stop=1000)
    assert cmd_verify(out, aux) == 0
    # tamper with one residue
    lines = open(aux).read().splitlines()
    parts = lines[40].split()
    parts[2] = str((int(parts[2]) + 1) % int(parts[0]))
    lines[40] = " ".join(parts)
    bad = str(tmp_path / "bad-aux.txt")
    open(bad, "w").write("\n".join(lines) + "\n")
    assert cmd_verify(out, bad) == 1
    assert cmd_verify(str(tmp_path / "nope.txt"), aux) == 2


def test_main_single_pair_iwasawa(capsys):
    assert main(["single", "13"]) == 0
    assert "regular" in capsys.readouterr().out
    assert main(["single", "37"]) == 0
    out = capsys.readouterr().out
    assert "irregular" in out and "indices=32" in out
    assert main(["pair", "37", "32"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["iwasawa", "37", "32"]) == 0
    assert capsys.readouterr().out.startswith("confirmed")


def test_main_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--from", "5"])
    assert exc.value.code == 2
    assert main(["single", "6"]) == 2  # not a prime
    capsys.readouterr()


def test_main_stats(tmp_path, capsys):
    _, out, _ = run_scan(tmp_path, "st", start=5, stop=2000)
    assert main(["stats", "--results", out, "--bucket-cap", "3"]) == 0
    text = capsys.readouterr().out
    assert "X =" in text and "p-value" in text
    assert main(["stats", "--results", str(tmp_path / "missing.txt")]) == 2
    capsys.readouterr()
