import csv
import io
import json
import subprocess
import sys

import pytest

from kmoments import cli
from kmoments.report import MOMENT_COLUMNS


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_verify_small_primes_exit_zero(capsys):
    # reference example, run with the default (stated) identity form
    code, _, err = run(["verify", "--primes", "5,7,11,13", "--threads", "1"], capsys)
    assert code == 0, err


def test_verify_corrected_form_exit_zero(capsys):
    code, out, err = run(["verify", "--primes", "5,7,11,13", "--threads", "1",
                          "--identity-form", "corrected"], capsys)
    assert code == 0, err
    records = json.loads(out)
    assert {"gamma_series_identity", "trig_integral", "bessel_j0_series_vs_integral",
            "dft_fast_vs_naive", "deligne_bound"} <= {r["name"] for r in records}


def test_verify_forced_failure(capsys):
    code, _, err = run(["verify", "--primes", "5,7", "--threads", "1", "--identity-form", "corrected",
                        "--tol", "1e-20"], capsys)
    assert code == 1
    assert "first failure" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--primes", "4"],
    ["moments", "--primes", "9"],
    ["moments", "--primes", "7", "--kappa", "0"],
    ["moments", "--primes", "7", "--kappa", "-1"],
    ["moments", "--primes", "2003,2011", "--fft", "verify-both"],
    ["lvalues", "--primes", "100003", "--s", "0.5"],
    ["verify", "--primes", "10007"],
    ["equidist", "--primes", "101", "--law", "nope"],
    ["equidist", "--primes", "101", "--grid", "1x8"],
    ["moments", "--primes", "7", "--format", "pdf"],
    ["moments"],
    ["bogus"],
])
def test_invalid_input(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_moments_example(capsys):
    code, out, _ = run(["moments", "--primes", "7", "--kappa", "1", "--n", "1", "--threads", "1"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert abs(float(row["re"]) - 24 / 7) < 1e-12
    assert float(row["predicted"]) == pytest.approx(7.0, abs=1e-12)
    assert list(row) == MOMENT_COLUMNS


def test_moments_odd_mixed_row(capsys):
    code, out, _ = run(["moments", "--primes", "1009", "--kl", "2:1", "--threads", "1"], capsys)
    (row,) = [r for r in rows(out) if r["kind"] == "mixed"]
    assert float(row["predicted"]) == 0
    assert float(row["bound_ratio"]) <= 1


def test_moments_row_error_column(capsys):
    code, out, _ = run(["moments", "--primes", "7", "--n", "0,1", "--threads", "1"], capsys)
    assert code == 0
    r = rows(out)
    assert r[0]["n"] == "0" and r[0]["error"] and r[0]["re"] == ""
    assert r[1]["error"] == ""


def test_csv_json_round_trip(tmp_path, capsys):
    code, out, _ = run(["moments", "--primes", "101,103", "--kappa", "1,2", "--kl", "1:0", "--star", "2",
                        "--threads", "1", "--out", str(tmp_path), "--format", "csv,json"], capsys)
    assert code == 0
    from_csv = rows((tmp_path / "moments.csv").read_text())
    from_json = json.loads((tmp_path / "moments.json").read_text())
    assert (tmp_path / "moments.csv").read_text() == out
    assert len(from_csv) == len(from_json) == 2 * (2 + 1 + 1)
    for a, b in zip(from_csv, from_json):
        for key in ("re", "predicted", "rel_err"):
            if b.get(key) is not None:
                assert float(a[key]) == b[key]
    # ordering: p, then kind, then parameters
    keys = [(int(r["p"]), r["kind"]) for r in from_csv]
    assert keys == sorted(keys, key=lambda k: (k[0], ["abs", "mixed", "star"].index(k[1])))


def test_equidist_outputs(tmp_path, capsys):
    code, out, _ = run(["equidist", "--primes", "101,1009", "--law", "arcsine-abs,disk-mu",
                        "--threads", "1", "--out", str(tmp_path), "--format", "csv,svg,png"], capsys)
    assert code == 0
    r = rows(out)
    assert [(x["p"], x["law"]) for x in r] == [("101", "arcsine-abs"), ("101", "disk-mu"),
                                               ("1009", "arcsine-abs"), ("1009", "disk-mu")]
    for p in (101, 1009):
        stem = tmp_path / f"hist_p{p}_arcsine-abs_abs"
        assert stem.with_suffix(".csv").exists()
        assert stem.with_suffix(".svg").read_text().startswith("<svg")
        assert stem.with_suffix(".png").read_bytes()[:4] == b"\x89PNG"
        assert (tmp_path / f"planar_p{p}.png").exists()


def test_equidist_sample_override(capsys):
    code, out, _ = run(["equidist", "--primes", "1009", "--law", "arcsine-sqrt", "--sample", "squared-abs",
                        "--threads", "1"], capsys)
    (row,) = rows(out)
    assert row["sample"] == "squared-abs" and float(row["value"]) < 0.1


def test_lvalues_columns(capsys):
    code, out, _ = run(["lvalues", "--primes", "101", "--kappa", "1", "--threads", "1"], capsys)
    assert code == 0
    r = rows(out)
    assert [x["kind"] for x in r] == ["l1", "lhalf", "lhalf2"]
    assert all(float(x["frak_s"]) == pytest.approx(1.1307500202284) for x in r)
    assert all(float(x["euler_gamma"]) == pytest.approx(0.5772156649015329) for x in r)


def test_scan(capsys):
    code, out, _ = run(["scan", "--prime-range", "100:140", "--threads", "1"], capsys)
    r = rows(out)
    assert [int(x["p"]) for x in r] == [101, 103, 107, 109, 113, 127, 131, 137, 139]
    assert all(float(x["max_abs_K"]) <= 2 + 1e-9 for x in r)


def test_fft_modes_agree(capsys):
    outs = []
    for mode in ("naive", "fast", "verify-both"):
        _, out, _ = run(["moments", "--primes", "101,211", "--kappa", "1.5", "--fft", mode, "--threads", "1"],
                        capsys)
        outs.append([(x["re"], x["predicted"]) for x in rows(out)])
    for a, b in zip(outs[0][0], outs[1][0]):
        assert float(a) == pytest.approx(float(b), rel=1e-10)


def strip_wall(text):
    return [{k: v for k, v in r.items() if k != "wall_ms"} for r in rows(text)]


@pytest.mark.parametrize("sub,extra", [
    ("moments", ["--kappa", "1,2.5", "--kl", "2:1", "--n", "1,2"]),
    ("scan", []),
    ("equidist", ["--law", "arcsine-abs,disk-mu"]),
])
def test_thread_determinism(sub, extra, monkeypatch):
    outs = []
    for threads in ("1", "4", "8"):
        monkeypatch.setenv("KM_THREADS", threads)
        res = subprocess.run([sys.executable, "-m", "kmoments", sub, "--prime-range", "100:400", *extra],
                             capture_output=True, text=True, check=True)
        outs.append(strip_wall(res.stdout))
    assert outs[0] == outs[1] == outs[2]


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("KM_THREADS", "3")
    assert cli.thread_count(8) == 3
    monkeypatch.delenv("KM_THREADS")
    assert cli.thread_count(5) == 5
    assert cli.thread_count(None) >= 1
