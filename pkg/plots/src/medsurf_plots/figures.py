"""Threshold-crossing and lattice figures from medsurf output files.

This package talks to the simulator only through its documented file
formats: the sweep CSV (columns d, p2, p_leak, shots, failures,
p_logical, stderr) and the lattice JSON dump. It never imports the
simulator itself.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

CSV_COLUMNS = ("d", "p2", "p_leak", "shots", "failures", "p_logical", "stderr")

# fixed, timestamp-free output so identical inputs give identical bytes
_SAVE_KWARGS = {"dpi": 150, "metadata": {"Date": None}}


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    out_path: str
    scan_variable: str | None = None  # None -> whichever rate varies
    threshold: float | None = None  # optional vertical annotation
    title: str | None = None


def read_sweep_csv(path: str) -> list:
    """Rows of a harness sweep CSV; rejects anything off-schema."""
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
    if not rows:
        raise ValueError(f"{path} contains no data rows")
    return rows


def _detect_scan_variable(rows) -> str:
    if len({r["p2"] for r in rows}) > 1:
        return "p2"
    return "p_leak"


def render_threshold_plot(spec: PlotSpec) -> str:
    """One p_logical curve per distance with stderr bars; returns out path."""
    rows = read_sweep_csv(spec.csv_path)
    scan = spec.scan_variable or _detect_scan_variable(rows)
    if scan not in ("p2", "p_leak"):
        raise ValueError(f"unknown scan variable {scan!r}")

    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    for d in sorted({r["d"] for r in rows}):
        sub = sorted((r[scan], r["p_logical"], r["stderr"])
                     for r in rows if r["d"] == d)
        x, y, err = (np.array(col) for col in zip(*sub))
        ax.errorbar(100 * x, y, yerr=err, marker="o", markersize=3,
                    linewidth=1.0, capsize=2, label=f"d = {d}")
    if spec.threshold is not None:
        ax.axvline(100 * spec.threshold, color="0.4", linestyle="--",
                   linewidth=0.9)
        ax.annotate(f"{100 * spec.threshold:.3g}%",
                    (100 * spec.threshold, ax.get_ylim()[1]),
                    textcoords="offset points", xytext=(4, -12), fontsize=8)
    label = "two-qubit gate error" if scan == "p2" else "charge leakage"
    ax.set_xlabel(f"{label} {scan.replace('_', '')} (%)")
    ax.set_ylabel("logical error rate per d rounds")
    ax.set_yscale("log")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_path, **_SAVE_KWARGS)
    plt.close(fig)
    return spec.out_path


def render_lattice_diagram(json_path: str, out_path: str) -> str:
    """Colour-group diagram of the plaquettes in a lattice JSON dump."""
    with open(json_path) as fh:
        doc = json.load(fh)
    for key in ("d", "plaquettes", "logical_x", "logical_z"):
        if key not in doc:
            raise ValueError(f"lattice dump is missing the {key!r} field")
    d = int(doc["d"])

    fig, ax = plt.subplots(figsize=(4.4, 4.4))
    palette = {(0, 0): "tab:red", (0, 1): "tab:blue",
               (1, 0): "tab:green", (1, 1): "tab:orange"}
    for p in doc["plaquettes"]:
        colour = palette[tuple(p["colour"])]
        cx, cy = p["col"] + 0.5, p["row"] + 0.5
        hatch = "//" if p["basis"] == "X" else None
        ax.add_patch(plt.Rectangle((cx - 0.5, cy - 0.5), 1, 1,
                                   facecolor=colour, alpha=0.45,
                                   hatch=hatch, edgecolor="k",
                                   linewidth=0.6))
        ax.annotate(p["basis"], (cx, cy), ha="center", va="center",
                    fontsize=7)
    for q in range(d * d):
        r, c = divmod(q, d)
        on_x = q in doc["logical_x"]
        on_z = q in doc["logical_z"]
        face = "k" if not (on_x or on_z) else ("tab:purple" if on_x and on_z
                                               else ("tab:blue" if on_x
                                                     else "tab:red"))
        ax.plot(c, r, "o", color=face, markersize=5)
    ax.set_xlim(-1.5, d + 0.5)
    ax.set_ylim(d + 0.5, -1.5)
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.set_title(f"d = {d} lattice, colour groups and logical supports",
                 fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path, **_SAVE_KWARGS)
    plt.close(fig)
    return out_path
