"""Pairwise generalized sparse products with pluggable execution strategies.

The engine evaluates, for every row pair (i, j) of two sparse matrices A and
B with equal column counts,

    out[i, j] = reduce over columns of product(A[i, c], B[j, c])

restricted to the columns actually stored on either side. Execution is split
into two sweeps:

* pass 1 sweeps the stored nonzeros of B, covering every column where B is
  nonzero (A's value is looked up, or taken as 0 when absent);
* pass 2 sweeps the stored nonzeros of A and contributes product(A[i, c], 0)
  exactly for the columns where B[j, c] is absent, skipping the columns
  already covered by pass 1.

Annihilating products make pass 2 a no-op, so it is skipped. Columns absent
from both sides never evaluate the product.

Three strategies share these exact semantics:

* ``NAIVE_MERGE``: one work item per (i, j) pair, aligning the two sorted
  column lists directly. No staging, no per-row accumulator.
* ``BALANCED_DENSE``: one work item per accumulated row. The row is scattered
  into a dense per-worker buffer of exactly ``n_cols`` elements, then the
  other matrix's coordinate-form nonzeros are swept once, probing the buffer.
* ``BALANCED_HASH``: like the dense strategy, but the accumulated row lives
  in a fixed-capacity open-addressing table. Rows whose degree exceeds the
  load-factor budget are split by :func:`plan_chunks` into column-range
  chunks, each fitting the budget; the sweep filters to the chunk's range so
  every column is processed exactly once.

All strategies reduce each output cell in ascending column order, each cell
is owned by exactly one worker, and results are bitwise identical across
runs and worker counts.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch
from .hashtable import HashAccumulator
from .sparse import segment_reduce

DENSE_COLUMN_LIMIT = 16384
HASH_CAPACITY_CAP = 16384


class StrategyKind(Enum):
    NAIVE_MERGE = "naive"
    BALANCED_DENSE = "dense"
    BALANCED_HASH = "hash"


@dataclass(frozen=True)
class ExecutionStrategy:
    kind: StrategyKind
    accumulator_capacity: int = 0  # hash strategy only
    max_load_factor: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.max_load_factor <= 1.0:
            raise ValueError("max_load_factor must be in (0, 1]")
        if self.kind is StrategyKind.BALANCED_HASH:
            if self.accumulator_capacity < 1:
                raise ValueError("hash strategy needs accumulator_capacity >= 1")
            if self.chunk_budget < 1:
                raise ValueError(
                    "accumulator_capacity * max_load_factor must admit at least one entry")

    @property
    def chunk_budget(self):
        return int(self.max_load_factor * self.accumulator_capacity)


@dataclass
class WorkspaceReport:
    """Accounting for one engine run.

    ``peak_accumulator_entries`` is the largest number of entries staged in
    any per-worker accumulator build; ``workspace_elements`` counts the
    coordinate-form row ids staged for the swept side (never more than that
    side's nnz); ``chunks_executed`` counts accumulator builds.
    """

    peak_accumulator_entries: int = 0
    workspace_elements: int = 0
    chunks_executed: int = 0

    def merged(self, other):
        return WorkspaceReport(
            max(self.peak_accumulator_entries, other.peak_accumulator_entries),
            max(self.workspace_elements, other.workspace_elements),
            self.chunks_executed + other.chunks_executed,
        )


def resolve_workers(workers=None):
    """Explicit count, else the WORKERS environment variable, else cpu count."""
    if workers is None:
        env = os.environ.get("WORKERS", "").strip()
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def auto_hash_capacity(m):
    """Smallest power of two at least twice the max row degree, capped."""
    max_degree = int(m.row_degrees.max()) if m.n_rows else 0
    need = max(2, 2 * max_degree)
    cap = 1 << (need - 1).bit_length()
    return min(cap, HASH_CAPACITY_CAP)


def choose_strategy(a, b=None):
    """Default strategy: dense accumulators while a column-sized buffer is
    cheap, otherwise hash accumulators sized to A's degrees (oversized rows
    fall back to chunking)."""
    if a.n_cols <= DENSE_COLUMN_LIMIT:
        return ExecutionStrategy(StrategyKind.BALANCED_DENSE)
    return ExecutionStrategy(StrategyKind.BALANCED_HASH,
                             accumulator_capacity=auto_hash_capacity(a))


def resolve_strategy(strategy, a, b=None, *, capacity=None, max_load_factor=0.5):
    """Accept an ExecutionStrategy, a kind name, "auto", or None."""
    if isinstance(strategy, ExecutionStrategy):
        return strategy
    if strategy is None or strategy == "auto":
        return choose_strategy(a, b)
    kind = StrategyKind(strategy)
    if kind is StrategyKind.BALANCED_HASH:
        if capacity is None:
            capacity = auto_hash_capacity(a)
        return ExecutionStrategy(kind, accumulator_capacity=int(capacity),
                                 max_load_factor=max_load_factor)
    return ExecutionStrategy(kind, max_load_factor=max_load_factor)


def plan_chunks(row_degree, strategy):
    """Split a row's nonzeros into index ranges fitting the hash budget.

    Ranges partition [0, row_degree) with sizes as equal as possible, each at
    most ``max_load_factor * accumulator_capacity``. A degree of zero yields
    one empty chunk.
    """
    if strategy.kind is not StrategyKind.BALANCED_HASH:
        raise ValueError("chunk planning applies to the hash strategy only")
    row_degree = int(row_degree)
    budget = strategy.chunk_budget
    if row_degree <= budget:
        return [(0, row_degree)]
    n_chunks = -(-row_degree // budget)
    base, rem = divmod(row_degree, n_chunks)
    spans = []
    start = 0
    for t in range(n_chunks):
        size = base + 1 if t < rem else base
        spans.append((start, start + size))
        start += size
    return spans


def allocate_output(a, b, semiring):
    """Dense m x n output initialized to the reduce identity."""
    return np.full((a.n_rows, b.n_rows), semiring.reduce_identity, dtype=np.float64)


def _check_inputs(a, b, out):
    if a.n_cols != b.n_cols:
        raise DimensionMismatch(f"column counts differ: {a.n_cols} vs {b.n_cols}")
    if out.shape != (a.n_rows, b.n_rows):
        raise ValueError(f"output shape {out.shape} != {(a.n_rows, b.n_rows)}")
    if out.dtype != np.float64:
        raise ValueError("output must be float64")


def _row_blocks(n_rows, workers):
    workers = min(max(1, workers), max(1, n_rows))
    bounds = np.linspace(0, n_rows, workers + 1).astype(np.int64)
    return [(int(bounds[t]), int(bounds[t + 1]))
            for t in range(workers) if bounds[t] < bounds[t + 1]]


def _run_blocks(blocks, body, workers):
    if len(blocks) <= 1 or workers <= 1:
        return [body(lo, hi) for lo, hi in blocks]
    with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
        return list(pool.map(lambda span: body(*span), blocks))


def _pass_balanced(acc, sweep, semiring, strategy, out, complement, workers):
    """Dense- and hash-accumulator sweeps.

    ``acc`` rows are staged one (chunk) at a time; ``sweep``'s coordinate
    nonzeros are scanned once per chunk. With ``complement`` unset this is
    pass 1 (acc = A, out rows owned); set, it is pass 2 (acc = B, out columns
    owned, probe hits skipped, products take a literal 0 right operand).
    """
    n_cols = acc.n_cols
    sweep_rows = sweep.coo_row_ids
    sweep_cols = sweep.indices
    sweep_vals = sweep.values
    product = semiring.product_op
    reduce_uf = semiring.reduce_op
    identity = semiring.reduce_identity
    hash_mode = strategy.kind is StrategyKind.BALANCED_HASH

    def body(lo, hi):
        peak = 0
        chunks_run = 0
        dense_buf = None if hash_mode else np.zeros(n_cols, dtype=np.float64)
        table = HashAccumulator(strategy.accumulator_capacity) if hash_mode else None
        for r in range(lo, hi):
            cols_r, vals_r = acc.row_slice(r)
            degree = cols_r.size
            spans = plan_chunks(degree, strategy) if hash_mode else [(0, degree)]
            n_spans = len(spans)
            if not hash_mode:
                dense_buf[cols_r] = vals_r
            for t, (s, e) in enumerate(spans):
                chunks_run += 1
                peak = max(peak, e - s)
                if n_spans == 1:
                    cols_sel, vals_sel, rows_sel = sweep_cols, sweep_vals, sweep_rows
                    bounds = sweep.indptr
                else:
                    col_lo = 0 if t == 0 else int(cols_r[s])
                    col_hi = n_cols if t == n_spans - 1 else int(cols_r[e])
                    in_range = (sweep_cols >= col_lo) & (sweep_cols < col_hi)
                    cols_sel = sweep_cols[in_range]
                    vals_sel = sweep_vals[in_range]
                    rows_sel = sweep_rows[in_range]
                    bounds = None
                if hash_mode:
                    table.build(cols_r[s:e], vals_r[s:e])
                    probed, found = table.probe_many(cols_sel)
                else:
                    probed = dense_buf[cols_sel]
                if not complement:
                    prods = product(probed, vals_sel)
                    seg_rows = rows_sel
                else:
                    miss = ~found if hash_mode else probed == 0.0
                    prods = product(vals_sel[miss], 0.0)
                    seg_rows = rows_sel[miss]
                    bounds = None
                if bounds is None:
                    counts = np.bincount(seg_rows, minlength=sweep.n_rows)
                    bounds = np.concatenate(([0], np.cumsum(counts)))
                partial = segment_reduce(np.asarray(prods, dtype=np.float64),
                                         bounds, reduce_uf, identity)
                if complement:
                    out[:, r] = reduce_uf(out[:, r], partial)
                else:
                    out[r, :] = reduce_uf(out[r, :], partial)
            if not hash_mode:
                dense_buf[cols_r] = 0.0
        return peak, chunks_run

    results = _run_blocks(_row_blocks(acc.n_rows, workers), body, workers)
    peak = max((p for p, _ in results), default=0)
    chunks = sum(c for _, c in results)
    return peak, chunks


def _pass_naive(a, b, semiring, out, complement, workers):
    """Per-pair merge of the two sorted column lists (reference strategy)."""
    product = semiring.product_op
    reduce_uf = semiring.reduce_op
    a_rows = [a.row_slice(i) for i in range(a.n_rows)]
    b_rows = [b.row_slice(j) for j in range(b.n_rows)]

    def body(lo, hi):
        for i in range(lo, hi):
            acols, avals = a_rows[i]
            na = acols.size
            row_out = out[i]
            for j in range(b.n_rows):
                bcols, bvals = b_rows[j]
                nb = bcols.size
                if not complement:
                    if nb == 0:
                        continue
                    if na == 0:
                        aligned = np.zeros(nb, dtype=np.float64)
                    else:
                        pos = np.minimum(np.searchsorted(acols, bcols), na - 1)
                        matched = acols[pos] == bcols
                        aligned = np.where(matched, avals[pos], 0.0)
                    prods = product(aligned, bvals)
                else:
                    if na == 0:
                        continue
                    if nb == 0:
                        prods = product(avals, 0.0)
                    else:
                        pos = np.minimum(np.searchsorted(bcols, acols), nb - 1)
                        present = bcols[pos] == acols
                        if present.all():
                            continue
                        prods = product(avals[~present], 0.0)
                row_out[j] = reduce_uf(row_out[j],
                                       reduce_uf.reduce(np.asarray(prods, dtype=np.float64)))
        return 0, 0

    _run_blocks(_row_blocks(a.n_rows, workers), body, workers)
    return 0, 0


def pairwise_spmv_pass1(a, b, semiring, strategy=None, out=None, workers=None):
    """Sweep B's stored nonzeros, reducing product(A value or 0, B value).

    Covers every column stored in B; for annihilating semirings this is the
    complete result. ``out`` must be initialized to the reduce identity.
    """
    strategy = resolve_strategy(strategy, a, b)
    if out is None:
        raise ValueError("pass 1 needs a pre-initialized output accumulator")
    _check_inputs(a, b, out)
    workers = resolve_workers(workers)
    if strategy.kind is StrategyKind.NAIVE_MERGE:
        peak, chunks = _pass_naive(a, b, semiring, out, complement=False,
                                   workers=workers)
        staged = 0
    else:
        peak, chunks = _pass_balanced(a, b, semiring, strategy, out,
                                      complement=False, workers=workers)
        staged = b.nnz
    return WorkspaceReport(peak, staged, chunks)


def pairwise_spmv_pass2(a, b, semiring, strategy=None, out=None, workers=None):
    """Sweep A's stored nonzeros, reducing product(A value, 0) exactly for
    the columns absent from the paired B row; columns covered by pass 1 are
    skipped. ``out`` holds the pass 1 result."""
    strategy = resolve_strategy(strategy, a, b)
    if out is None:
        raise ValueError("pass 2 accumulates into the pass 1 output")
    _check_inputs(a, b, out)
    workers = resolve_workers(workers)
    if strategy.kind is StrategyKind.NAIVE_MERGE:
        peak, chunks = _pass_naive(a, b, semiring, out, complement=True,
                                   workers=workers)
        staged = 0
    else:
        peak, chunks = _pass_balanced(b, a, semiring, strategy, out,
                                      complement=True, workers=workers)
        staged = a.nnz
    return WorkspaceReport(peak, staged, chunks)


def pairwise_generalized(a, b, semiring, strategy=None, workers=None):
    """Full evaluation: pass 1, plus pass 2 for non-annihilating products.

    Returns the dense output and the merged workspace report. A and B may be
    the same object (self-distance) without copying.
    """
    strategy = resolve_strategy(strategy, a, b)
    out = allocate_output(a, b, semiring)
    report = pairwise_spmv_pass1(a, b, semiring, strategy, out, workers=workers)
    if not semiring.annihilating:
        report = report.merged(
            pairwise_spmv_pass2(a, b, semiring, strategy, out, workers=workers))
    return out, report
