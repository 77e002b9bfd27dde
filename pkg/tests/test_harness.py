"""Tests for the sweep harness, CSV interfaces and threshold fitting."""

import json

import numpy as np
import pytest

from medsurf.harness import (
    CSV_COLUMNS,
    SweepSpec,
    SweepResult,
    default_shots,
    estimate_logical_rate,
    fit_threshold,
    read_csv,
    run_sweep,
    write_csv,
    write_manifest,
)


def _synthetic_result(pth, distances=(3, 5, 7), grid=None, amp=0.08):
    """Noise-free p_logical(p, d) curves that cross exactly at pth."""
    if grid is None:
        grid = np.round(np.arange(0.004, 0.0121, 0.0005), 10)
    rows = []
    for d in distances:
        for p in grid:
            pl = min(float(amp * (p / pth) ** ((d + 1) / 2)), 0.75)
            rows.append({
                "d": d, "p2": float(p), "p_leak": 0.0, "shots": 100000,
                "failures": int(round(pl * 100000)), "p_logical": pl,
                "stderr": float(np.sqrt(pl * (1 - pl) / 100000)),
            })
    return SweepResult(rows)


def test_default_shots():
    assert default_shots(3) == 20000
    assert default_shots(5) == 20000
    assert default_shots(7) == 10000


def test_fit_threshold_recovers_planted_values():
    rng = np.random.default_rng(40)
    grid_step = 0.0005
    worst = 0.0
    for _ in range(20):
        pth = float(rng.uniform(0.006, 0.011))
        est = fit_threshold(_synthetic_result(pth).rows, "p2")
        assert not est.no_crossing
        worst = max(worst, abs(est.crossing - pth))
    assert worst < grid_step


def test_fit_threshold_flags_non_crossing_curves():
    rows = []
    grid = np.round(np.arange(0.004, 0.0081, 0.0005), 10)
    for d in (3, 5, 7):
        for p in grid:
            pl = 0.01 * d * (1 + 10 * float(p))  # ordered, never crossing
            rows.append({"d": d, "p2": float(p), "p_leak": 0.0,
                         "shots": 10000, "failures": int(pl * 10000),
                         "p_logical": pl, "stderr": 0.001})
    est = fit_threshold(rows, "p2")
    assert est.no_crossing
    assert np.isnan(est.crossing)


def test_fit_threshold_needs_enough_curves():
    res = _synthetic_result(0.008, distances=(3, 5))
    with pytest.raises(ValueError):
        fit_threshold(res.rows, "p2")
    short = _synthetic_result(0.008, grid=np.array([0.006, 0.008, 0.01]))
    with pytest.raises(ValueError):
        fit_threshold(short.rows, "p2")


def test_csv_round_trip(tmp_path):
    res = _synthetic_result(0.009)
    path = tmp_path / "sweep.csv"
    write_csv(str(path), res.rows)
    back = read_csv(str(path))
    assert len(back) == len(res.rows)
    header = path.read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    for got, want in zip(back, res.rows):
        assert got["d"] == want["d"]
        assert got["p2"] == want["p2"]
        assert got["failures"] == want["failures"]
        assert got["p_logical"] == pytest.approx(want["p_logical"])


def test_read_csv_rejects_wrong_schema(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("d,p2,shots\n3,0.004,100\n")
    with pytest.raises(ValueError, match="schema"):
        read_csv(str(path))


def test_stderr_column_formula():
    spec = SweepSpec(distances=(3,), scan_variable="p2",
                     grid=(0.01,), fixed=0.0,
                     flavour="s_gate", leak_model="worst_case",
                     shots=2000, seed=7)
    res = run_sweep(spec)
    row = res.rows[0]
    p = row["p_logical"]
    assert row["p_logical"] == row["failures"] / row["shots"]
    assert row["stderr"] == pytest.approx(np.sqrt(p * (1 - p) / row["shots"]))


def test_sweep_grid_and_row_order():
    spec = SweepSpec(distances=(3, 5), scan_variable="p2",
                     grid=(0.004, 0.008), fixed=0.0,
                     flavour="s_gate", leak_model="worst_case",
                     shots=1000, seed=3)
    res = run_sweep(spec)
    assert [(r["d"], r["p2"]) for r in res.rows] == [
        (3, 0.004), (3, 0.008), (5, 0.004), (5, 0.008)]
    assert all(r["p_leak"] == 0.0 for r in res.rows)


def test_estimate_is_deterministic_across_worker_counts():
    kwargs = dict(d=3, p2=0.008, p_leak=0.001, flavour="s_gate",
                  leak_model="worst_case", shots=6000, seed=11,
                  point_index=0)
    serial = estimate_logical_rate(workers=1, **kwargs)
    parallel = estimate_logical_rate(workers=3, **kwargs)
    assert serial == parallel


def test_csv_bytes_stable_across_runs(tmp_path):
    spec = SweepSpec(distances=(3,), scan_variable="p2",
                     grid=(0.006, 0.01), fixed=0.0, flavour="s_gate",
                     leak_model="worst_case", shots=2000, seed=5)
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(str(out_a), run_sweep(spec).rows)
    write_csv(str(out_b), run_sweep(spec).rows)
    assert out_a.read_bytes() == out_b.read_bytes()


def test_manifest_contents(tmp_path):
    payload = {"seed": 9, "flavour": "s_gate", "distances": [3],
               "scan": "p2=0.004:0.004:0.0005", "shots": None}
    path = tmp_path / "m.json"
    write_manifest(str(path), payload)
    doc = json.loads(path.read_text())
    assert doc == payload
    # keys are sorted so the file is byte-stable
    text = path.read_text()
    keys = [line.split('"')[1] for line in text.splitlines()
            if line.strip().startswith('"')]
    assert keys == sorted(keys)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(distances=(3,), scan_variable="p2", grid=(),
                  fixed=0.0, flavour="s_gate",
                  leak_model="worst_case", shots=1000, seed=0)
    with pytest.raises(ValueError):
        SweepSpec(distances=(3,), scan_variable="p2", grid=(0.01,),
                  fixed=0.0, flavour="s_gate",
                  leak_model="worst_case", shots=10, seed=0)
