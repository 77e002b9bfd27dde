"""Command-line interface.

Subcommands:
  simulate   run a sweep and write CSV + JSON manifest
  threshold  fit a threshold crossing from a sweep CSV
  device     print device-physics numbers for given dot parameters
  verify     run the gate-identity and compilation checks
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .harness import (SweepSpec, fit_threshold, read_csv, run_sweep,
                      write_csv, write_manifest)


def _parse_scan(text: str):
    """Parse 'var=start:stop:step' into (variable, grid tuple)."""
    try:
        var, rng = text.split("=", 1)
        start, stop, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "scan must look like p2=0.004:0.012:0.0005"
        )
    if var not in ("p2", "p_leak"):
        raise argparse.ArgumentTypeError("scan variable must be p2 or p_leak")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("scan range must be increasing")
    n = int(round((stop - start) / step)) + 1
    return var, tuple(round(start + i * step, 12) for i in range(n))


def _parse_distances(text: str):
    try:
        ds = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("distances must be like 3,5,7")
    if any(d < 3 or d % 2 == 0 for d in ds):
        raise argparse.ArgumentTypeError("distances must be odd and >= 3")
    return ds


_GATE_FLAVOURS = {"s": "s_gate", "s_gate": "s_gate",
                  "sqrtswap": "sqrtswap", "sqrt_swap": "sqrtswap"}


def _apply_config_defaults(parser, argv):
    """A --config file holds flat key=value lines mirroring the flags."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    extra = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            flag = "--" + key.strip().replace("_", "-")
            if flag == "--scan":
                extra += [flag, value.strip()]
            else:
                extra += [flag, value.strip()]
    # command-line flags win over config-file values
    return extra + rest


def _cmd_simulate(args) -> int:
    var, grid = args.scan
    fixed = args.pleak if var == "p2" else args.p2
    spec = SweepSpec(
        distances=args.distances,
        scan_variable=var,
        grid=grid,
        fixed=fixed,
        flavour=_GATE_FLAVOURS[args.gate],
        leak_model=args.leak_model,
        shots=args.shots,
        seed=args.seed,
    )

    def progress(row):
        print(
            "d=%d %s=%.6g p_logical=%.5f (%d/%d shots failed)"
            % (row["d"], var, row[var], row["p_logical"], row["failures"],
               row["shots"]),
            flush=True,
        )

    result = run_sweep(spec, progress=progress if args.verbose else None)
    write_csv(args.out, result.rows)
    manifest = {
        "command": "simulate",
        "version": __version__,
        "distances": list(spec.distances),
        "scan_variable": var,
        "grid": list(grid),
        "fixed": fixed,
        "gate": spec.flavour,
        "leak_model": spec.leak_model,
        "shots": spec.shots,
        "seed": spec.seed,
        "out": args.out,
    }
    write_manifest(args.out + ".manifest.json", manifest)
    print("wrote %d rows to %s" % (len(result.rows), args.out))
    return 0


def _cmd_threshold(args) -> int:
    rows = read_csv(args.infile)
    scan = args.variable
    if scan is None:
        # whichever of the two rates actually varies
        scan = "p2" if len({r["p2"] for r in rows}) > 1 else "p_leak"
    est = fit_threshold(rows, scan)
    if est.no_crossing and not est.pair_crossings:
        print("no crossing found in the scanned grid")
        return 1
    print("threshold %s = %.6g +- %.2g%s" % (
        scan, est.crossing, est.half_width,
        " (extrapolated)" if est.extrapolated else "",
    ))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({
                "scan_variable": scan,
                "crossing": est.crossing,
                "half_width": est.half_width,
                "pair_crossings": list(est.pair_crossings),
                "no_crossing": est.no_crossing,
                "extrapolated": est.extrapolated,
            }, fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_device(args) -> int:
    from .device import (TimingParams, cycle_time, dephasing_per_cycle,
                         mediated_exchange_estimate, residual_exchange_ratio)

    j_on = mediated_exchange_estimate(args.t, args.delta_on, args.delta_m)
    print("J_on  = %.6g Hz" % j_on)
    if args.delta_off is not None:
        j_off = mediated_exchange_estimate(args.t, args.delta_off, args.delta_m)
        print("J_off = %.6g Hz" % j_off)
        print("J_off/J_on = %.3g" % (j_off / j_on))
        print("residual ratio (mediated) = %.3g"
              % residual_exchange_ratio(args.delta_on, args.delta_off, "mediated"))
        print("residual ratio (direct)   = %.3g"
              % residual_exchange_ratio(args.delta_on, args.delta_off, "direct"))
    # reference timings: 1 us exchange, 0.5 us single-qubit, T2 = 28 ms
    tp = TimingParams(t_j=1e-6, t_z=0.5e-6, t_h=0.0, t_2=28e-3)
    for flavour in ("s_gate", "sqrtswap"):
        cyc = cycle_time(flavour, tp)
        print("cycle %-8s = %.4g s (dephasing/cycle %.3g)"
              % (flavour, cyc, dephasing_per_cycle(cyc, tp.t_2)))
    return 0


def _cmd_verify(args) -> int:
    from .circuit import verify_cz_decompositions

    report = verify_cz_decompositions()
    ok = True
    for name, passed in sorted(report.items()):
        print("%-28s %s" % (name, "ok" if passed else "FAIL"))
        ok = ok and passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medsurf",
        description="surface-code threshold simulator for exchange-coupled "
                    "spin qubits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a sweep, write CSV")
    sim.add_argument("--distances", type=_parse_distances, default=(3, 5, 7))
    sim.add_argument("--gate", choices=sorted(_GATE_FLAVOURS), default="s")
    sim.add_argument("--scan", type=_parse_scan, required=True,
                     metavar="VAR=START:STOP:STEP")
    sim.add_argument("--pleak", type=float, default=0.0,
                     help="fixed leakage rate when scanning p2")
    sim.add_argument("--p2", type=float, default=0.005,
                     help="fixed gate error rate when scanning p_leak")
    sim.add_argument("--leak-model", choices=("worst_case", "refined"),
                     default="worst_case")
    sim.add_argument("--shots", type=int, default=None,
                     help="shots per point (default 20000, 10000 at d=7)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True)
    sim.add_argument("--verbose", action="store_true")
    sim.set_defaults(func=_cmd_simulate)

    thr = sub.add_parser("threshold", help="fit crossing from a sweep CSV")
    thr.add_argument("--in", dest="infile", required=True)
    thr.add_argument("--variable", choices=("p2", "p_leak"), default=None)
    thr.add_argument("--json", default=None, help="also write estimate JSON")
    thr.set_defaults(func=_cmd_threshold)

    dev = sub.add_parser("device", help="device-physics numbers")
    dev.add_argument("--t", type=float, required=True,
                     help="tunnel coupling in Hz")
    dev.add_argument("--delta-on", type=float, required=True,
                     help="on-state detuning in Hz")
    dev.add_argument("--delta-m", type=float, required=True,
                     help="mediator charge splitting in Hz")
    dev.add_argument("--delta-off", type=float, default=None)
    dev.set_defaults(func=_cmd_device)

    ver = sub.add_parser("verify", help="gate-identity and compilation checks")
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if argv and argv[0] not in ("-h", "--help"):
        head, tail = argv[:1], _apply_config_defaults(parser, argv[1:])
        argv = head + tail
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
