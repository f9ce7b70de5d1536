import json
import struct
import subprocess
import sys

import pytest

from unbiased.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_csv_range(capsys):
    code, out, _ = run(capsys, "gen", "--n", "6", "--count", "3", "--bias", "0.3", "--seed", "1")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert all(0 <= int(v) < 6 for v in lines)


def test_gen_n_one_telemetry(capsys):
    code, out, _ = run(capsys, "gen", "--n", "1", "--count", "2", "--bias", "0.5",
                       "--seed", "0", "--telemetry")
    assert code == 0 and out.splitlines() == ["0,0", "0,0"]


def test_gen_is_deterministic(capsys):
    args = ("gen", "--n", "30", "--count", "50", "--bias", "0.2", "--seed", "4", "--telemetry")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_formats_carry_same_values(capsys):
    base = ("gen", "--n", "12", "--count", "20", "--bias", "0.35", "--seed", "8")
    csv_vals = [int(v) for v in run(capsys, *base)[1].split()]
    json_vals = [json.loads(l)["value"] for l in run(capsys, *base, "--format", "json")[1].splitlines()]
    assert csv_vals == json_vals


def test_raw_format_bytes():
    base = [sys.executable, "-m", "unbiased", "gen", "--n", "12", "--count", "5",
            "--bias", "0.35", "--seed", "8"]
    csv = subprocess.run(base, capture_output=True, check=True).stdout.split()
    raw = subprocess.run(base + ["--format", "raw"], capture_output=True, check=True).stdout
    assert len(raw) == 40
    assert list(struct.unpack("<5Q", raw)) == [int(v) for v in csv]


def test_json_telemetry(capsys):
    _, out, _ = run(capsys, "gen", "--n", "6", "--bias", "0.5", "--seed", "2",
                    "--format", "json", "--telemetry")
    rec = json.loads(out)
    assert set(rec) == {"value", "flips", "stages"}
    assert [s["prime"] for s in rec["stages"]] == [2, 3]
    assert rec["flips"] == sum((s["rejected_rounds"] + 1) * s["prime"] for s in rec["stages"])


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--n", "0", "--bias", "0.5"],
        ["gen", "--n", "6", "--bias", "1.5"],
        ["gen", "--n", "6", "--bias", "0"],
        ["gen", "--n", "6"],
        ["gen", "--n", "6", "--bias", "0.5", "--bits", "x.bin"],
        ["gen", "--bias", "0.5"],
        ["gen", "--n", "-1", "--bias", "0.5"],
        ["bench"],
        ["bench", "--n", "6", "--sweep", "10"],
        ["factor", "0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_gen_exhaustion_exit_3(capsys, bit_file):
    path = bit_file("HT" * 3)
    code, out, err = run(capsys, "gen", "--n", "2", "--count", "10", "--bits", str(path))
    assert code == 3
    assert out.splitlines() == ["0", "0", "0"]
    assert "3 samples completed" in err


def test_gen_round_cap_exit_4(capsys, bit_file):
    path = bit_file("HHH" * 10)
    code, _, err = run(capsys, "gen", "--n", "3", "--bits", str(path), "--max-rounds", "5")
    assert code == 4 and "cap" in err


def test_gen_from_bits(capsys, bit_file):
    path = bit_file("TH" + "TTH")
    code, out, _ = run(capsys, "gen", "--n", "6", "--bits", str(path), "--telemetry")
    assert code == 0 and out.strip() == "5,5"


def test_verify_defaults_pass(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") > 0


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--max-p", "5", "--bias-grid", "1/3", "--json")
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert {c["check"] for c in report["checks"]} >= {"lemma_partition p=5", "composite_uniform n<=30 a=1/3"}


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--max-p", "4"],
        ["verify", "--max-p", "23"],
        ["verify", "--bias-grid", "0/1"],
        ["verify", "--bias-grid", "1/1"],
        ["verify", "--bias-grid", "0.5"],
        ["verify", "--bias-grid", "1/0"],
        ["verify", "--bias-grid", "1/3,x"],
    ],
)
def test_verify_bad_flags(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_reports_failure(capsys, monkeypatch):
    from unbiased import cli

    monkeypatch.setattr(cli.oracle, "check_residue_equivalence", lambda p, a: p != 3)
    code, out, _ = run(capsys, "verify", "--max-p", "5", "--bias-grid", "1/2")
    assert code == 1 and "FAIL  residue_equivalence p=3" in out


def test_bench_n6(capsys):
    code, out, _ = run(capsys, "bench", "--n", "6", "--bias", "0.5", "--seed", "7",
                       "--samples", "100000", "--json")
    rep = json.loads(out)
    assert code == 0 and float(rep["theoretical_flips"]) == 8
    assert abs(rep["empirical_mean_flips"] - 8) < 0.2
    assert rep["chi_square"]["pass"]


def test_bench_n2_text(capsys):
    code, out, _ = run(capsys, "bench", "--n", "2", "--bias", "0.5", "--seed", "1", "--samples", "2000")
    assert code == 0 and "theoretical expected flips = 4" in out


def test_bench_sweep(capsys):
    code, out, _ = run(capsys, "bench", "--sweep", "1000", "--json")
    rep = json.loads(out)
    assert code == 0
    assert 0 <= rep["sublinearity_fraction"] <= 1
    assert rep["c"]["12"] == 7


def test_factor_lines(capsys):
    assert run(capsys, "factor", "12")[1].splitlines() == ["12 = 2^2 * 3", "c(12) = 7"]
    assert run(capsys, "factor", "13")[1].splitlines() == ["13 = 13", "c(13) = 13"]
    assert run(capsys, "factor", "1")[1].splitlines() == ["1 = (empty product)"]
