"""k-NN query benchmark harness: phase timings, workspace accounting, and a
tolerance-quantized output checksum for cross-strategy comparison. Timing
covers the query only; loading the data is the caller's phase.
"""

import hashlib
import time
from dataclasses import asdict

import numpy as np

from .engine import ExecutionStrategy
from .knn import kneighbors_detail

CHECKSUM_QUANTUM_DECIMALS = 8  # values rounded to 1e-8 before hashing


def quantized_checksum(arr):
    """SHA-256 over values rounded to 1e-8; absorbs reduction-order noise."""
    q = np.round(np.ascontiguousarray(arr, dtype=np.float64),
                 CHECKSUM_QUANTUM_DECIMALS)
    q = q + 0.0  # normalize -0.0 so equal matrices hash equally
    return hashlib.sha256(q.tobytes()).hexdigest()


def _strategy_label(strategy):
    if isinstance(strategy, ExecutionStrategy):
        label = strategy.kind.value
        if strategy.accumulator_capacity:
            label += f"(capacity={strategy.accumulator_capacity}," \
                     f"load={strategy.max_load_factor:g})"
        return label
    return str(strategy or "auto")


def run_bench(index, queries, spec, strategy=None, k=10, batch_rows=None,
              repeat=1, workers=None):
    """Run the query phase ``repeat`` times and report the median.

    Returns a JSON-ready dict: per-phase wall times (seconds), workspace
    accounting, and the checksum of the neighbor distances.
    """
    repeat = max(1, int(repeat))
    runs = []
    result = report = timings = plan = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result, report, timings, plan = kneighbors_detail(
            index, queries, k, spec, strategy, batch_rows, workers)
        runs.append(time.perf_counter() - t0)
    return {
        "metric": spec.name,
        "params": dict(spec.params),
        "strategy": _strategy_label(strategy),
        "k": k,
        "index_rows": index.n_rows,
        "query_rows": queries.n_rows,
        "n_cols": index.n_cols,
        "index_nnz": index.nnz,
        "query_nnz": queries.nnz,
        "batch_rows": plan.batch_rows,
        "n_batches": plan.n_batches,
        "timings": dict(timings),
        "query_seconds": float(np.median(runs)),
        "runs": runs,
        "workspace": asdict(report),
        "checksum": quantized_checksum(result.distances),
    }
