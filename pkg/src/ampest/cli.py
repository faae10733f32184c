"""Command-line interface.

Subcommands:
  run <algo>    one or more seeded runs of a single cell, CSV to --out/stdout
  sweep         full sweep from a JSON config file
  poly dump     (x, P(x), p2(x)) triples of a polynomial family as CSV
  table bhmt    the closed-form phase-estimation query count
  fit           query-complexity model fits from a completed sweep CSV

Exit codes: 0 success, 2 config error, 3 I/O error, 4 construction failure.
"""

import argparse
import json
import sys

from .baselines import bhmt_queries
from .errors import ConstructionFailed, DomainError
from .harness import SweepConfig, fit_models, run_sweep
from .polys import (build_chebyshev, build_erf_poly, build_hybrid_poly,
                    build_line_poly, build_monomial, build_repair_pair)


def _add_run_parser(sub):
    p = sub.add_parser("run", help="run one parameter cell")
    p.add_argument("algorithm", choices=["chebae", "unbiased", "hybrid",
                                         "repair-chebae", "mlae", "classical"])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--beta", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--mode")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--shift-amplitude", action="store_true",
                   help="estimate (1+a)/2 instead of a")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--n-shots", type=int, default=100)
    p.add_argument("--nu", type=float, default=8.0)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--shots-per-round", type=int, default=100)
    p.add_argument("--las-vegas", action="store_true")
    p.add_argument("--known-kappa", type=float)


def _add_poly_parser(sub):
    p = sub.add_parser("poly", help="polynomial utilities")
    p.add_argument("action", choices=["dump"])
    p.add_argument("family", choices=["chebyshev", "monomial", "line", "erf",
                                      "hybrid", "repair-j", "repair-k"])
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--a-min", type=float, default=0.3)
    p.add_argument("--a-max", type=float, default=0.6)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--k", type=float, default=4.0)
    p.add_argument("--tau", type=float, default=0.025)
    p.add_argument("--a-mid", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=0.25)
    p.add_argument("--poly-mode", default="polynomial",
                   choices=["polynomial", "ideal"])
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--out")


def _build_family(args):
    if args.family == "chebyshev":
        return build_chebyshev(args.d)
    if args.family == "monomial":
        return build_monomial()
    if args.family == "line":
        return build_line_poly(args.a_min, args.a_max, args.eta, args.poly_mode)
    if args.family == "erf":
        return build_erf_poly(args.k, args.eta)
    if args.family == "hybrid":
        return build_hybrid_poly(args.tau, args.eta, args.k, args.a_mid,
                                 enforce_midpoint=False)
    j_spec, k_spec = build_repair_pair(args.kappa, args.eta)
    return j_spec if args.family == "repair-j" else k_spec


def _cmd_poly(args):
    spec = _build_family(args)
    if args.points < 2:
        raise DomainError("need at least 2 points")
    step = (args.x_max - args.x_min) / (args.points - 1)
    lines = ["x,P,p2"]
    for i in range(args.points):
        x = args.x_min + i * step
        p_str = repr(spec.value(x)) if spec.value is not None else ""
        lines.append(f"{x!r},{p_str},{spec.p2(x)!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_run(args):
    grid = {"a": [args.a]}
    for key in ("eps", "delta", "beta", "eta", "mu", "mode"):
        val = getattr(args, key)
        if val is not None:
            grid[key] = [val]
    extra = {"r": args.r, "n_shots": args.n_shots, "nu": args.nu,
             "k_max": args.k_max, "shots_per_round": args.shots_per_round,
             "shift_amplitude": args.shift_amplitude,
             "las_vegas": args.las_vegas}
    if args.known_kappa is not None:
        extra["known_kappa"] = args.known_kappa
    cfg = SweepConfig(algorithm=args.algorithm, grid=grid, runs=args.runs,
                      seed=args.seed, out=args.out, workers=args.workers,
                      extra=extra)
    if args.out:
        run_sweep(cfg)
    else:
        run_sweep(cfg, stream=sys.stdout)
    return 0


def _cmd_sweep(args):
    cfg = SweepConfig.from_json(args.config)
    if cfg.out is None:
        run_sweep(cfg, stream=sys.stdout)
    else:
        run_sweep(cfg)
    return 0


def _cmd_fit(args):
    result = fit_models(args.infile)
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="ampest")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)

    p_sweep = sub.add_parser("sweep", help="run a sweep from a JSON config")
    p_sweep.add_argument("--config", required=True)

    _add_poly_parser(sub)

    p_table = sub.add_parser("table", help="closed-form query tables")
    p_table.add_argument("name", choices=["bhmt"])
    p_table.add_argument("--eps", type=float, required=True)
    p_table.add_argument("--delta", type=float, default=0.05)

    p_fit = sub.add_parser("fit", help="fit query-complexity models")
    p_fit.add_argument("--in", dest="infile", required=True)
    p_fit.add_argument("--out")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "poly":
            return _cmd_poly(args)
        if args.command == "table":
            print(bhmt_queries(args.eps, args.delta))
            return 0
        if args.command == "fit":
            return _cmd_fit(args)
        parser.error(f"unknown command {args.command!r}")
    except ConstructionFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (DomainError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
