"""Brute-force batched k-nearest-neighbor search over any catalog metric."""

import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, KTooLarge
from .engine import WorkspaceReport
from .metrics import pairwise_distances_detail
from .sparse import slice_rows

DEFAULT_MEMORY_BUDGET_BYTES = 256 * (1 << 20)


@dataclass(frozen=True)
class NeighborResult:
    """Top-k distances (non-decreasing per row) and index-row ids per query."""

    distances: np.ndarray  # (n_queries, k) float64
    indices: np.ndarray    # (n_queries, k) int64


@dataclass(frozen=True)
class BatchPlan:
    batch_rows: int
    n_batches: int
    batch_output_elements: int


def plan_batches(n_queries, n_index, batch_rows=None,
                 memory_budget_bytes=DEFAULT_MEMORY_BUDGET_BYTES):
    """Pick a query batch size keeping the dense batch output under budget."""
    if batch_rows is None:
        batch_rows = memory_budget_bytes // (8 * max(1, n_index))
    batch_rows = int(max(1, min(batch_rows, max(1, n_queries))))
    n_batches = -(-n_queries // batch_rows) if n_queries else 0
    return BatchPlan(batch_rows, n_batches, batch_rows * n_index)


def select_topk(row_distances, k):
    """k smallest values in ascending order; ties broken by ascending index."""
    row_distances = np.asarray(row_distances, dtype=np.float64)
    if k > row_distances.size:
        raise KTooLarge(f"k={k} exceeds {row_distances.size} candidates")
    order = np.argsort(row_distances, kind="stable")[:k]
    return row_distances[order], order.astype(np.int64)


def kneighbors_detail(index, queries, k, spec, strategy=None, batch_rows=None,
                      workers=None, memory_budget_bytes=DEFAULT_MEMORY_BUDGET_BYTES):
    """kneighbors plus merged workspace report and per-phase timings."""
    if index.n_cols != queries.n_cols:
        raise DimensionMismatch(
            f"column counts differ: {queries.n_cols} vs {index.n_cols}")
    if k > index.n_rows:
        raise KTooLarge(f"k={k} exceeds {index.n_rows} index rows")
    if k < 0:
        raise ValueError("k must be non-negative")

    plan = plan_batches(queries.n_rows, index.n_rows, batch_rows, memory_budget_bytes)
    distances = np.empty((queries.n_rows, k), dtype=np.float64)
    neighbor_ids = np.empty((queries.n_rows, k), dtype=np.int64)
    report = WorkspaceReport()
    timings = {"norms": 0.0, "pass1": 0.0, "pass2": 0.0, "expansion": 0.0, "topk": 0.0}

    for start in range(0, queries.n_rows, plan.batch_rows):
        stop = min(start + plan.batch_rows, queries.n_rows)
        batch = queries if (start == 0 and stop == queries.n_rows) \
            else slice_rows(queries, start, stop)
        dists, rep, times = pairwise_distances_detail(batch, index, spec,
                                                      strategy, workers)
        report = report.merged(rep)
        for key, value in times.items():
            timings[key] += value
        t0 = time.perf_counter()
        order = np.argsort(dists, axis=1, kind="stable")[:, :k]
        neighbor_ids[start:stop] = order
        distances[start:stop] = np.take_along_axis(dists, order, axis=1)
        timings["topk"] += time.perf_counter() - t0

    return NeighborResult(distances, neighbor_ids), report, timings, plan


def kneighbors(index, queries, k, spec, strategy=None, batch_rows=None,
               workers=None, memory_budget_bytes=DEFAULT_MEMORY_BUDGET_BYTES):
    """For each query row, the k nearest index rows under the given metric.

    Results are independent of the batch size; ties break toward the smaller
    index id, and self-matches are not excluded.
    """
    result, _, _, _ = kneighbors_detail(index, queries, k, spec, strategy,
                                        batch_rows, workers, memory_budget_bytes)
    return result
