"""Command-line interface: dist, knn, bench, gen, verify.

Exit codes: 0 success, 1 usage error, 2 domain or parse error,
3 verification failure.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .bench import run_bench
from .engine import ExecutionStrategy, StrategyKind, auto_hash_capacity
from .errors import SemidistError
from .generate import GenSpec, generate, parse_degree_dist
from .knn import kneighbors
from .metrics import METRIC_NAMES, metric_registry, pairwise_distances_detail
from .mmio import read_matrix_market, write_matrix_market, write_output
from .sparse import degree_stats, slice_rows
from .verification import verify_metric


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise _UsageExit(message)


@dataclass
class RunConfig:
    command: str
    metric: str = ""
    p: float = None
    strategy: str = "auto"
    capacity: int = None
    load_factor: float = 0.5
    k: int = 10
    batch_rows: int = None
    input: str = ""
    input_b: str = ""
    out: str = ""
    fmt: str = "csv"
    seed: int = 0
    workers: int = None
    permissive: bool = False


def _add_metric_args(p):
    p.add_argument("--metric", required=True, choices=METRIC_NAMES)
    p.add_argument("--p", type=float, default=None,
                   help="minkowski order (required for --metric minkowski)")
    p.add_argument("--permissive", action="store_true",
                   help="saturate kl coverage violations instead of erroring")


def _add_strategy_args(p):
    p.add_argument("--strategy", choices=["auto", "naive", "dense", "hash"],
                   default="auto")
    p.add_argument("--capacity", type=int, default=None,
                   help="hash accumulator capacity (hash strategy)")
    p.add_argument("--load-factor", type=float, default=0.5)
    p.add_argument("--workers", type=int, default=None,
                   help="worker count (overrides the WORKERS env var)")


def build_parser():
    parser = _Parser(prog="semidist",
                     description="Semiring-configurable sparse pairwise "
                                 "distances and k-NN")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[], help="pairwise distance matrix")
    _add_metric_args(p)
    p.add_argument("--input", required=True, help="Matrix Market file (rows = A)")
    p.add_argument("--input-b", default=None, help="second matrix (default: A)")
    _add_strategy_args(p)
    p.add_argument("--out", default=None, help="output path (default: stdout CSV)")
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    p.add_argument("--header", action="store_true")

    p = sub.add_parser("knn", help="k nearest index rows per query row")
    _add_metric_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--input", required=True, help="index matrix")
    p.add_argument("--queries", default=None, help="query matrix (default: index)")
    p.add_argument("--batch-rows", type=int, default=None)
    _add_strategy_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    p.add_argument("--header", action="store_true")

    p = sub.add_parser("bench", help="timed k-NN query with workspace report")
    _add_metric_args(p)
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--queries", type=int, default=None,
                   help="query only the first N rows (default: all)")
    p.add_argument("--batch-rows", type=int, default=None)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--json", action="store_true", help="emit the full JSON report")
    _add_strategy_args(p)

    p = sub.add_parser("gen", help="generate a synthetic Matrix Market dataset")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--degree-dist", required=True,
                   help="uniform:D or zipf:S:MAXDEG")
    p.add_argument("--value-dist", choices=["uniform01", "tfidf"],
                   default="uniform01")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="compare the engine against the dense "
                                      "reference formulas")
    p.add_argument("--metric", default="all",
                   help="metric name or 'all' (default)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-rows", type=int, default=40)
    p.add_argument("--max-cols", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    _add_strategy_args(p)
    return parser


def _strategy_from_args(args, a):
    if args.strategy == "auto":
        return None
    kind = StrategyKind(args.strategy)
    if kind is StrategyKind.BALANCED_HASH:
        capacity = args.capacity if args.capacity else auto_hash_capacity(a)
        return ExecutionStrategy(kind, accumulator_capacity=capacity,
                                 max_load_factor=args.load_factor)
    return ExecutionStrategy(kind, max_load_factor=args.load_factor)


def _cmd_dist(args):
    a = read_matrix_market(args.input)
    b = read_matrix_market(args.input_b) if args.input_b else a
    spec = metric_registry(args.metric, p=args.p, strict=not args.permissive)
    strategy = _strategy_from_args(args, a)
    dist, report, timings = pairwise_distances_detail(a, b, spec, strategy,
                                                      args.workers)
    if args.out:
        write_output(dist, args.out, args.fmt, header=args.header)
        print(f"wrote {dist.shape[0]} x {dist.shape[1]} distances to {args.out}")
    else:
        for row in dist:
            print(",".join(f"{v:.17g}" for v in row))
    print(f"phases: " + " ".join(f"{k}={v:.4f}s" for k, v in timings.items()),
          file=sys.stderr)
    return 0


def _cmd_knn(args):
    index = read_matrix_market(args.input)
    queries = read_matrix_market(args.queries) if args.queries else index
    spec = metric_registry(args.metric, p=args.p, strict=not args.permissive)
    strategy = _strategy_from_args(args, queries)
    result = kneighbors(index, queries, args.k, spec, strategy,
                        args.batch_rows, args.workers)
    if args.out:
        write_output(result, args.out, args.fmt, header=args.header)
        print(f"wrote {result.indices.shape[0]} x {args.k} neighbors to {args.out}")
    else:
        for q in range(result.indices.shape[0]):
            for j, d in zip(result.indices[q], result.distances[q]):
                print(f"{q},{j},{d:.17g}")
    return 0


def _cmd_bench(args):
    t0 = time.perf_counter()
    index = read_matrix_market(args.input)
    load_seconds = time.perf_counter() - t0
    queries = index
    if args.queries is not None:
        queries = slice_rows(index, 0, min(args.queries, index.n_rows))
    spec = metric_registry(args.metric, p=args.p, strict=not args.permissive)
    strategy = _strategy_from_args(args, queries)
    report = run_bench(index, queries, spec, strategy, k=args.k,
                       batch_rows=args.batch_rows, repeat=args.repeat,
                       workers=args.workers)
    report["timings"] = {"load": load_seconds, **report["timings"]}
    stats = degree_stats(index)
    report["degrees"] = {"min": stats.min_degree, "max": stats.max_degree,
                         "mean": stats.mean_degree}
    if args.json:
        print(json.dumps(report))
    else:
        print(f"{report['metric']} strategy={report['strategy']} "
              f"k={report['k']} queries={report['query_rows']}")
        print(f"query: {report['query_seconds']:.4f}s "
              + " ".join(f"{k}={v:.4f}s" for k, v in report["timings"].items()))
        ws = report["workspace"]
        print(f"workspace: staged={ws['workspace_elements']} "
              f"peak_entries={ws['peak_accumulator_entries']} "
              f"chunks={ws['chunks_executed']}")
        print(f"checksum: {report['checksum']}")
    return 0


def _cmd_gen(args):
    fields = parse_degree_dist(args.degree_dist)
    spec = GenSpec(n_rows=args.rows, n_cols=args.cols,
                   value_dist=args.value_dist, seed=args.seed, **fields)
    matrix = generate(spec)
    write_matrix_market(matrix, args.out)
    stats = degree_stats(matrix)
    print(f"wrote {matrix.n_rows} x {matrix.n_cols} matrix, nnz={matrix.nnz}, "
          f"degrees min={stats.min_degree} mean={stats.mean_degree:.2f} "
          f"max={stats.max_degree} to {args.out}")
    return 0


def _cmd_verify(args):
    names = METRIC_NAMES if args.metric == "all" else (args.metric,)
    for name in names:
        if name not in METRIC_NAMES:
            raise SemidistError(f"unknown metric '{name}'")
    failed = False
    for name in names:
        res = verify_metric(name, trials=args.trials, max_rows=args.max_rows,
                            max_cols=args.max_cols, seed=args.seed,
                            strategy=_strategy_from_args_metricless(args))
        status = "PASS" if res.passed else "FAIL"
        print(f"{name}: {status} ({res.trials} trials, "
              f"max abs err {res.max_abs_err:.3e})")
        failed = failed or not res.passed
    print("FAIL" if failed else "PASS")
    return 3 if failed else 0


def _strategy_from_args_metricless(args):
    if args.strategy == "auto":
        return None
    kind = StrategyKind(args.strategy)
    if kind is StrategyKind.BALANCED_HASH:
        capacity = args.capacity if args.capacity else 64
        return ExecutionStrategy(kind, accumulator_capacity=capacity,
                                 max_load_factor=args.load_factor)
    return ExecutionStrategy(kind, max_load_factor=args.load_factor)


_COMMANDS = {
    "dist": _cmd_dist,
    "knn": _cmd_knn,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
    "verify": _cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit:
        return 1
    try:
        return _COMMANDS[args.command](args)
    except SemidistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
