"""Time every catalog metric on one generated dataset.

Runs the k-NN query benchmark per metric with the default strategy and
prints a table splitting single-pass (dot-product style) metrics from the
two-pass ones, roughly reproducing a per-metric timing sweep at desk scale.

Example:
    python scripts/metric_sweep.py --rows 3000 --cols 2000 --queries 256
"""

import argparse
import sys

import numpy as np

from semidist import GenSpec, METRIC_NAMES, generate, metric_registry, slice_rows
from semidist.bench import run_bench


def parse_args():
    p = argparse.ArgumentParser(description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--rows", type=int, default=3000)
    p.add_argument("--cols", type=int, default=2000)
    p.add_argument("--degree-dist", default="zipf:1.3:200")
    p.add_argument("--queries", type=int, default=256)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    return p.parse_args()


def main():
    args = parse_args()
    from semidist import parse_degree_dist
    spec = GenSpec(args.rows, args.cols, seed=args.seed,
                   **parse_degree_dist(args.degree_dist))
    index = generate(spec)
    queries = slice_rows(index, 0, min(args.queries, index.n_rows))
    print(f"dataset {args.rows}x{args.cols} nnz={index.nnz}, "
          f"{queries.n_rows} queries, k={args.k}\n")
    print(f"{'metric':<15} {'passes':>6} {'query_s':>9} {'pass1_s':>9} "
          f"{'pass2_s':>9} {'expand_s':>9}")
    rows = []
    for name in METRIC_NAMES:
        p = 1.5 if name == "minkowski" else None
        metric = metric_registry(name, p=p, strict=False)
        print(f"running {name} ...", file=sys.stderr)
        rep = run_bench(index, queries, metric, k=args.k)
        rows.append((name, metric.passes, rep))
    for name, passes, rep in sorted(rows, key=lambda r: (r[1], r[0])):
        t = rep["timings"]
        print(f"{name:<15} {passes:>6} {rep['query_seconds']:>9.3f} "
              f"{t['pass1']:>9.3f} {t['pass2']:>9.3f} {t['expansion']:>9.3f}")
    single = np.median([r["query_seconds"] for _, p, r in rows if p == 1])
    double = np.median([r["query_seconds"] for _, p, r in rows if p == 2])
    print(f"\nmedian single-pass {single:.3f}s, median two-pass {double:.3f}s")


if __name__ == "__main__":
    main()
