#!/usr/bin/env python3
"""Regenerate benchmark figures from completed sweep / polynomial-dump CSVs.

    python plots/render.py --figure q_vs_eps --in sweep.csv --out fig.png
    python plots/render.py --figure amppolys --in j.csv k.csv --out jk.png \
        --style eta=0.1 kappa=0.25

Reads files only; never simulates and never imports the estimation package.
Sweep figures also write `<out>.data.json` with the exact plotted numbers.
"""

import argparse
import sys

try:
    from figures import FIGURES, SchemaError
except ImportError:  # invoked from the repository root
    from plots.figures import FIGURES, SchemaError


def parse_style(pairs):
    style = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"style options look like key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        style[key] = value
    return style


def main(argv=None):
    parser = argparse.ArgumentParser(prog="render")
    parser.add_argument("--figure", required=True)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--style", nargs="*", default=None,
                        help="key=value pairs, e.g. eta=0.1 kappa=0.25")
    args = parser.parse_args(argv)
    fig = FIGURES.get(args.figure)
    if fig is None:
        print(f"unknown figure {args.figure!r}; known: {sorted(FIGURES)}",
              file=sys.stderr)
        return 2
    try:
        sidecar = fig(args.inputs, args.out, parse_style(args.style))
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if sidecar:
        print(sidecar)
    return 0


if __name__ == "__main__":
    sys.exit(main())
