"""Command-line entry point for rendering medsurf figures."""

from __future__ import annotations

import argparse
import sys

from .figures import PlotSpec, render_lattice_diagram, render_threshold_plot


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medsurf-plots",
        description="Render figures from medsurf sweep CSVs and lattice dumps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    thr = sub.add_parser("threshold", help="logical error rate vs scan value")
    thr.add_argument("--in", dest="csv_path", required=True,
                     help="sweep CSV written by medsurf simulate")
    thr.add_argument("--out", required=True, help="output image (.png or .svg)")
    thr.add_argument("--variable", choices=("p2", "p_leak"), default=None)
    thr.add_argument("--threshold", type=float, default=None,
                     help="annotate a crossing value with a vertical line")
    thr.add_argument("--title", default=None)

    lat = sub.add_parser("lattice", help="plaquette colour-group diagram")
    lat.add_argument("--in", dest="json_path", required=True,
                     help="lattice JSON dump")
    lat.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "threshold":
            out = render_threshold_plot(PlotSpec(
                csv_path=args.csv_path,
                out_path=args.out,
                scan_variable=args.variable,
                threshold=args.threshold,
                title=args.title,
            ))
        else:
            out = render_lattice_diagram(args.json_path, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
