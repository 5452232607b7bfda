"""Command-line front end, one subcommand per workflow.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .benchmark import BenchmarkGrid, format_table, run_benchmark, summarize
from .estimator import InfeasibleAllocationError, fit
from .generator import GeneratorConfig, UnbalancedConfigError, generate_network
from .io import (
    DataFormatError,
    format_edge_list,
    fit_report,
    read_edge_list,
    read_sidecar,
    sidecar_dict,
    write_json,
    write_matrix_csv,
)
from .selection import CRITERIA, select_model
from .ssc import ConvergenceError, DegenerateAffinityError

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


class UsageError(Exception):
    pass


def cmd_simulate(args) -> int:
    try:
        cfg = GeneratorConfig(args.n, args.k, args.l, args.omega, seed=args.seed, b_min=args.b_min)
    except UnbalancedConfigError as exc:
        raise UsageError(str(exc)) from exc
    net = generate_network(cfg)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True)
    edges = out.with_name(out.name + ".edges")
    sidecar = out.with_name(out.name + ".json")
    edges.write_text(format_edge_list(net.graph))
    sidecar.write_text(json.dumps(sidecar_dict(net.params, cfg.to_dict()), indent=2, sort_keys=True) + "\n")
    print(f"wrote {edges} and {sidecar}", file=sys.stderr)
    return 0


def _truth_path(args):
    if args.truth:
        return Path(args.truth)
    candidate = Path(args.input).with_suffix(".json")
    return candidate if candidate.exists() else None


def cmd_fit(args) -> int:
    truth = None
    truth_path = _truth_path(args)
    if truth_path is not None:
        truth = read_sidecar(truth_path)
    graph = read_edge_list(args.input, n=truth.n if truth is not None else None)

    selection = None
    if args.select:
        selection = select_model(graph, l_max=args.lmax, k_max=args.kmax,
                                 criterion=args.criterion, seed=args.seed)
        result = selection.best
    else:
        if args.k is None or args.l is None:
            raise UsageError("fit needs --k and --l, or --select")
        if not 1 <= args.l <= args.k <= graph.n:
            raise UsageError(f"need 1 <= L <= K <= n, got L={args.l}, K={args.k}, n={graph.n}")
        result = fit(graph, args.k, args.l, seed=args.seed)

    report = fit_report(result, truth, selection)
    if args.phat:
        write_matrix_csv(args.phat, result.clamped() if args.clamp else result.P_hat)
        report["phat"] = str(args.phat)
        report["clamped"] = bool(args.clamp)
    if args.out:
        write_json(args.out, report)
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_benchmark(args) -> int:
    try:
        grid = BenchmarkGrid.from_dict(json.loads(Path(args.grid).read_text()))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise DataFormatError(f"invalid grid {args.grid}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.seed is not None:
        grid = BenchmarkGrid(**{**grid.__dict__, "seed": args.seed})
    try:
        results = run_benchmark(grid, threads=args.threads)
    except UnbalancedConfigError as exc:
        raise UsageError(str(exc)) from exc
    table = format_table(grid, summarize(grid, results))
    if args.out:
        Path(args.out).write_text(table)
    else:
        sys.stdout.write(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nbm", description="Nested block model toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a balanced NBM network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--omega", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--b-min", type=float, default=0.35)
    p.add_argument("--out", default="network", help="output prefix; writes PREFIX.edges and PREFIX.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="cluster and estimate from an edge list")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--truth", help="ground-truth sidecar (default: the .json next to the edge list)")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--select", action="store_true", help="choose K and L automatically")
    p.add_argument("--lmax", type=int, default=3)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--criterion", choices=CRITERIA, default="aic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--phat", help="write the estimated probability matrix as CSV")
    p.add_argument("--clamp", action="store_true", help="clip the CSV estimate to [0, 1]")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("benchmark", help="replicated simulate-and-fit sweep")
    p.add_argument("--grid", required=True, help="JSON grid: n, K, L, omega, fit_models, replicates, seed")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, help="worker processes (default: $NBM_THREADS or 1)")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nbm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, InfeasibleAllocationError) as exc:
        print(f"nbm: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConvergenceError, DegenerateAffinityError) as exc:
        print(f"nbm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
