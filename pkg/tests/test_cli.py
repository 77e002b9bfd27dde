"""End-to-end tests of the command-line interface."""

import argparse
import json
import subprocess
import sys

import pytest

from medsurf.cli import _parse_distances, _parse_scan, main
from medsurf.harness import read_csv


def _run(args):
    return subprocess.run([sys.executable, "-m", "medsurf.cli"] + args,
                          capture_output=True, text=True, cwd="/root/pkg")


def test_parse_scan_grid():
    var, grid = _parse_scan("p2=0.004:0.012:0.0005")
    assert var == "p2"
    assert len(grid) == 17
    assert grid[0] == pytest.approx(0.004)
    assert grid[-1] == pytest.approx(0.012)
    var, grid = _parse_scan("p_leak=0:0.002:0.001")
    assert var == "p_leak"
    assert list(grid) == pytest.approx([0.0, 0.001, 0.002])


def test_parse_scan_rejects_garbage():
    for bad in ("p2=1:2", "p3=0:1:0.5", "p2=0.01:0.004:0.001", "p2"):
        with pytest.raises((ValueError, argparse.ArgumentTypeError)):
            _parse_scan(bad)


def test_parse_distances():
    assert _parse_distances("3,5,7") == (3, 5, 7)
    for bad in ("2,4", "1", "3;5", ""):
        with pytest.raises((ValueError, argparse.ArgumentTypeError)):
            _parse_distances(bad)


def test_simulate_writes_csv_and_manifest(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["simulate", "--distances", "3", "--gate", "s",
               "--scan", "p2=0.006:0.01:0.002", "--pleak", "0",
               "--shots", "1000", "--seed", "42", "--out", str(out)])
    assert rc == 0
    rows = read_csv(str(out))
    assert len(rows) == 3
    assert [r["p2"] for r in rows] == pytest.approx([0.006, 0.008, 0.01])
    assert all(r["d"] == 3 and r["p_leak"] == 0.0 for r in rows)
    manifest = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    assert manifest["seed"] == 42
    assert manifest["gate"] in ("s", "s_gate")


def test_simulate_row_count_matches_example_shape(tmp_path):
    # the documented fig5a invocation yields 3 distances x 17 grid points;
    # verified here at 2 distances to keep the suite fast
    out = tmp_path / "fig.csv"
    rc = main(["simulate", "--distances", "3,5", "--gate", "s",
               "--scan", "p2=0.004:0.012:0.0005", "--pleak", "0",
               "--shots", "1000", "--seed", "1", "--out", str(out)])
    assert rc == 0
    rows = read_csv(str(out))
    assert len(rows) == 2 * 17


def test_threshold_command(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    assert main(["simulate", "--distances", "3,5,7", "--gate", "s",
                 "--scan", "p2=0.006:0.011:0.001", "--pleak", "0",
                 "--shots", "2000", "--seed", "3", "--out", str(out)]) == 0
    est_json = tmp_path / "est.json"
    rc = main(["threshold", "--in", str(out), "--json", str(est_json)])
    text = capsys.readouterr().out
    if rc == 0:
        assert "threshold p2" in text
        doc = json.loads(est_json.read_text())
        assert doc["scan_variable"] == "p2"
        assert 0.004 < doc["crossing"] < 0.013
    else:
        assert "no crossing" in text


def test_threshold_rejects_missing_file():
    res = _run(["threshold", "--in", "/nonexistent/x.csv"])
    assert res.returncode == 2
    assert "error" in res.stderr.lower()


def test_device_command_reference_numbers():
    res = _run(["device", "--t", "1e9", "--delta-on", "1e10",
                "--delta-m", "1e10"])
    assert res.returncode == 0
    assert "1 MHz" in res.stdout or "1.000 MHz" in res.stdout or "1e+06" in res.stdout


def test_verify_command():
    res = _run(["verify"])
    assert res.returncode == 0


def test_invalid_flag_gives_usage_and_nonzero_exit():
    res = _run(["simulate", "--frobnicate", "1"])
    assert res.returncode == 2
    assert "usage" in res.stderr.lower()


def test_unknown_subcommand():
    res = _run(["transmogrify"])
    assert res.returncode == 2


def test_bad_scan_value_exits_nonzero(tmp_path):
    res = _run(["simulate", "--distances", "3", "--gate", "s",
                "--scan", "p2=0.01:0.004:0.001", "--pleak", "0",
                "--shots", "1000", "--seed", "1",
                "--out", str(tmp_path / "x.csv")])
    assert res.returncode == 2
    assert "error" in res.stderr.lower()
