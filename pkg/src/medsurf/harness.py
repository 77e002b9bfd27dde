"""Sweep configuration, logical-rate estimation and threshold fitting.

Sweeps run points over a grid of one scan variable (p2 or p_leak) at
several code distances. Shots are processed in fixed-size chunks whose
seeds derive from (master seed, point index, chunk index), so results
are byte-identical no matter how many workers consume the chunks.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

CSV_COLUMNS = ("d", "p2", "p_leak", "shots", "failures", "p_logical", "stderr")
CHUNK_SHOTS = 2000
WORKER_ENV = "MEDSURF_WORKERS"


def default_shots(d: int) -> int:
    return 20000 if d <= 5 else 10000


@dataclass(frozen=True)
class SweepSpec:
    distances: tuple
    scan_variable: str  # "p2" or "p_leak"
    grid: tuple  # scan values
    fixed: float  # value of the non-scanned rate
    flavour: str = "s_gate"
    leak_model: str = "worst_case"
    shots: int | None = None  # None -> per-distance default
    seed: int = 0

    def __post_init__(self):
        if self.scan_variable not in ("p2", "p_leak"):
            raise ValueError("scan variable must be p2 or p_leak")
        if len(self.grid) == 0:
            raise ValueError("empty scan grid")
        if self.shots is not None and self.shots < 1000:
            raise ValueError("need at least 1000 shots per point")

    def rates(self, value: float) -> tuple:
        """(p2, p_leak) for one grid value."""
        if self.scan_variable == "p2":
            return value, self.fixed
        return self.fixed, value


@dataclass(frozen=True)
class SweepResult:
    rows: tuple  # dict per CSV row

    def for_distance(self, d: int):
        return [r for r in self.rows if r["d"] == d]


@dataclass(frozen=True)
class ThresholdEstimate:
    crossing: float
    half_width: float
    pair_crossings: tuple
    no_crossing: bool
    extrapolated: bool


def _worker_count() -> int:
    env = os.environ.get(WORKER_ENV)
    if env:
        return max(1, int(env))
    return 1


def _chunk_failures(args):
    d, p2, p_leak, flavour, leak_model, seed_key, shots = args
    sim = _cached_sim(d, p2, p_leak, flavour, leak_model)
    return sim.count_failures(list(seed_key), shots)


_SIM_CACHE = {}


def _cached_sim(d, p2, p_leak, flavour, leak_model):
    key = (d, p2, p_leak, flavour, leak_model)
    if key not in _SIM_CACHE:
        from .sim import Simulator
        from .table import ErrorModelParams

        _SIM_CACHE.clear()  # one live configuration per process is enough
        _SIM_CACHE[key] = Simulator(
            d, ErrorModelParams.preset(p2, p_leak=p_leak, flavour=flavour,
                                       leak_model=leak_model)
        )
    return _SIM_CACHE[key]


def estimate_logical_rate(d, p2, p_leak, flavour, leak_model, shots,
                          seed, point_index, workers=None) -> dict:
    """One sweep point: runs shots, counts either-logical failures."""
    if workers is None:
        workers = _worker_count()
    chunks = []
    done = 0
    ci = 0
    while done < shots:
        n = min(CHUNK_SHOTS, shots - done)
        chunks.append((d, p2, p_leak, flavour, leak_model,
                       (seed, point_index, ci), n))
        done += n
        ci += 1
    if workers == 1:
        failures = sum(_chunk_failures(c) for c in chunks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            failures = sum(pool.map(_chunk_failures, chunks))
    p = failures / shots
    return {
        "d": d,
        "p2": p2,
        "p_leak": p_leak,
        "shots": shots,
        "failures": failures,
        "p_logical": p,
        "stderr": float(np.sqrt(p * (1.0 - p) / shots)),
    }


def run_sweep(spec: SweepSpec, workers=None, progress=None) -> SweepResult:
    rows = []
    point = 0
    for d in spec.distances:
        shots = spec.shots if spec.shots is not None else default_shots(d)
        for value in spec.grid:
            p2, p_leak = spec.rates(value)
            row = estimate_logical_rate(d, p2, p_leak, spec.flavour,
                                        spec.leak_model, shots, spec.seed,
                                        point, workers)
            rows.append(row)
            point += 1
            if progress is not None:
                progress(row)
    return SweepResult(tuple(rows))


# ---------------------------------------------------------------------------
# CSV / manifest I/O
# ---------------------------------------------------------------------------


def write_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([repr(r[c]) if isinstance(r[c], float) else r[c]
                        for c in CSV_COLUMNS])


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(
                "unexpected CSV schema: want columns %s, got %s"
                % (",".join(CSV_COLUMNS), reader.fieldnames)
            )
        rows = []
        for rec in reader:
            rows.append({
                "d": int(rec["d"]),
                "p2": float(rec["p2"]),
                "p_leak": float(rec["p_leak"]),
                "shots": int(rec["shots"]),
                "failures": int(rec["failures"]),
                "p_logical": float(rec["p_logical"]),
                "stderr": float(rec["stderr"]),
            })
    return rows


def write_manifest(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Threshold fitting
# ---------------------------------------------------------------------------


def _pair_crossing(grid, ya, yb):
    """Crossing of two curves via local quadratic fits; None if no crossing."""
    diff = yb - ya
    sign_changes = [
        i for i in range(len(grid) - 1)
        if diff[i] <= 0 < diff[i + 1] or diff[i] >= 0 > diff[i + 1]
    ]
    if not sign_changes:
        return None
    # use the sign change with the steepest local slope of the difference
    best = max(sign_changes, key=lambda i: abs(diff[i + 1] - diff[i]))
    lo = max(0, best - 2)
    hi = min(len(grid), best + 3)
    if hi - lo < 3:
        lo, hi = max(0, hi - 3), min(len(grid), lo + 3)
    x = grid[lo:hi]
    deg = min(2, len(x) - 1)
    ca = np.polyfit(x, ya[lo:hi], deg)
    cb = np.polyfit(x, yb[lo:hi], deg)
    roots = np.roots(cb - ca)
    mid = 0.5 * (grid[best] + grid[best + 1])
    real = [float(r.real) for r in roots if abs(r.imag) < 1e-12]
    inside = [r for r in real if x[0] - 1e-15 <= r <= x[-1] + 1e-15]
    if inside:
        return min(inside, key=lambda r: abs(r - mid))
    return mid  # quadratics barely separate; the bracketing midpoint stands


def fit_threshold(rows, scan_variable: str) -> ThresholdEstimate:
    """Aggregate pairwise curve crossings into a threshold estimate."""
    dists = sorted({r["d"] for r in rows})
    if len(dists) < 3:
        raise ValueError("need at least 3 distances to fit a threshold")
    curves = {}
    for d in dists:
        sub = sorted((r[scan_variable], r["p_logical"])
                     for r in rows if r["d"] == d)
        curves[d] = (np.array([x for x, _ in sub]),
                     np.array([y for _, y in sub]))
    grid0 = curves[dists[0]][0]
    if len(grid0) < 5:
        raise ValueError("need at least 5 grid points to fit a threshold")
    for d in dists[1:]:
        if not np.array_equal(curves[d][0], grid0):
            raise ValueError("distances were scanned on different grids")
    crossings = []
    for i in range(len(dists) - 1):
        c = _pair_crossing(grid0, curves[dists[i]][1],
                           curves[dists[i + 1]][1])
        if c is not None:
            crossings.append(c)
    n_pairs = len(dists) - 1
    if not crossings:
        return ThresholdEstimate(float("nan"), float("nan"), (), True, False)
    value = float(np.mean(crossings))
    half = float((max(crossings) - min(crossings)) / 2.0)
    extrapolated = not (grid0[0] <= value <= grid0[-1])
    return ThresholdEstimate(value, half, tuple(crossings),
                             len(crossings) < n_pairs, extrapolated)
