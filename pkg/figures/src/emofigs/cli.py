"""Command line: render one figure kind from input tables.

    emosim-figures strength --input tau_sweep.csv --output strength.svg
    emosim-figures all --results-dir ../results --output-dir out/
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import FigureInputError
from .render import FIGURE_KINDS, FigureSpec, render

# Default input table per figure kind, relative to a results directory.
DEFAULT_INPUTS = {
    "strength": ("tau_sweep.csv",),
    "diff": ("tau_sweep.csv",),
    "vitality": ("vitality.csv",),
    "shares": ("tau_sweep.csv",),
    "equal_prior": ("equal_prior.csv",),
    "gap": ("gap_sweep.csv",),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emosim-figures",
        description="Render figures from simulator sweep tables")
    sub = parser.add_subparsers(dest="kind", required=True, metavar="KIND")
    for kind in FIGURE_KINDS:
        p = sub.add_parser(kind, help=f"render the {kind} figure")
        p.add_argument("--input", action="append", required=True,
                       help="input CSV (repeatable)")
        p.add_argument("--output", required=True, help="output SVG path")
    batch = sub.add_parser("all", help="render every figure from a results directory")
    batch.add_argument("--results-dir", required=True,
                       help="directory holding the sweep CSVs")
    batch.add_argument("--output-dir", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "all":
            results = Path(args.results_dir)
            out = Path(args.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            for kind in FIGURE_KINDS:
                inputs = tuple(str(results / name) for name in DEFAULT_INPUTS[kind])
                path = render(FigureSpec(kind, inputs, str(out / f"{kind}.svg")))
                print(f"wrote {path}")
        else:
            path = render(FigureSpec(args.kind, tuple(args.input), args.output))
            print(f"wrote {path}")
    except (FigureInputError, FileNotFoundError) as exc:
        print(f"emosim-figures: {exc}", file=sys.stderr)
        return 2
    return 0


def console_entry() -> None:
    raise SystemExit(main())
