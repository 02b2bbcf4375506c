"""Compare execution strategies on a generated dataset.

Generates a synthetic sparse matrix, runs the k-NN query benchmark once per
strategy, and prints a comparison table with speedups over the per-pair
merge baseline. The naive strategy is slow at scale; cap its cost with
--queries.

Example:
    python scripts/strategy_benchmark.py --rows 4000 --cols 4000 \
        --degree-dist uniform:40 --metric manhattan --queries 64
"""

import argparse
import json
import sys

from semidist import (
    ExecutionStrategy,
    GenSpec,
    StrategyKind,
    auto_hash_capacity,
    generate,
    metric_registry,
    parse_degree_dist,
    slice_rows,
)
from semidist.bench import run_bench


def parse_args():
    p = argparse.ArgumentParser(description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--rows", type=int, default=4000)
    p.add_argument("--cols", type=int, default=4000)
    p.add_argument("--degree-dist", default="uniform:40")
    p.add_argument("--value-dist", choices=["uniform01", "tfidf"],
                   default="uniform01")
    p.add_argument("--metric", default="manhattan")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--queries", type=int, default=64)
    p.add_argument("--capacity", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--skip-naive", action="store_true")
    p.add_argument("--json", action="store_true")
    return p.parse_args()


def main():
    args = parse_args()
    spec = GenSpec(args.rows, args.cols, value_dist=args.value_dist,
                   seed=args.seed, **parse_degree_dist(args.degree_dist))
    index = generate(spec)
    queries = slice_rows(index, 0, min(args.queries, index.n_rows))
    metric = metric_registry(args.metric, p=args.p)
    capacity = args.capacity or auto_hash_capacity(queries)

    strategies = {
        "dense": ExecutionStrategy(StrategyKind.BALANCED_DENSE),
        "hash": ExecutionStrategy(StrategyKind.BALANCED_HASH,
                                  accumulator_capacity=capacity),
    }
    if not args.skip_naive:
        strategies["naive"] = ExecutionStrategy(StrategyKind.NAIVE_MERGE)

    reports = {}
    for name, strategy in strategies.items():
        print(f"running {name} ...", file=sys.stderr)
        reports[name] = run_bench(index, queries, metric, strategy, k=args.k,
                                  repeat=args.repeat)

    if args.json:
        print(json.dumps(reports))
        return

    baseline = reports.get("naive", reports["dense"])["query_seconds"]
    checksums = {r["checksum"] for r in reports.values()}
    print(f"\n{args.metric} on {args.rows}x{args.cols} "
          f"(nnz={index.nnz}), {queries.n_rows} queries, k={args.k}")
    print(f"{'strategy':<10} {'query_s':>9} {'pass1_s':>9} {'pass2_s':>9} "
          f"{'speedup':>8} {'peak_acc':>9} {'chunks':>8}")
    for name, rep in sorted(reports.items(), key=lambda kv: kv[1]["query_seconds"]):
        t = rep["timings"]
        ws = rep["workspace"]
        print(f"{name:<10} {rep['query_seconds']:>9.3f} {t['pass1']:>9.3f} "
              f"{t['pass2']:>9.3f} {baseline / rep['query_seconds']:>7.1f}x "
              f"{ws['peak_accumulator_entries']:>9} {ws['chunks_executed']:>8}")
    print("checksums agree" if len(checksums) == 1 else
          "WARNING: checksums differ across strategies")


if __name__ == "__main__":
    main()
