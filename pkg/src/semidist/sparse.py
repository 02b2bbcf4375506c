"""Sparse row-matrix containers, validation, conversions, and row reductions.

All containers are immutable after construction (backing arrays are marked
read-only) and safe to share across threads. Values are float64 throughout;
a canonical matrix has sorted, duplicate-free column ids within each row and
stores no explicit zeros.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import IndexOutOfBounds, NegativeOffset, NonMonotonicIndptr


def _freeze(arr):
    arr.setflags(write=False)
    return arr


def _index_array(x):
    return np.ascontiguousarray(x, dtype=np.int64)


def _value_array(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def segment_reduce(values, boundaries, ufunc, identity):
    """Reduce ``values`` over consecutive segments.

    Segment ``t`` covers ``values[boundaries[t]:boundaries[t+1]]``; segments
    must tile ``values`` exactly (``boundaries[0] == 0`` and
    ``boundaries[-1] == len(values)``). Empty segments yield ``identity``.
    """
    boundaries = np.asarray(boundaries)
    n_segments = boundaries.size - 1
    result = np.full(n_segments, identity, dtype=np.float64)
    if n_segments == 0:
        return result
    if boundaries[0] != 0 or boundaries[-1] != len(values):
        raise ValueError("segment boundaries must tile the value array")
    if len(values) == 0:
        return result
    starts = boundaries[:-1]
    nonempty = starts < boundaries[1:]
    if nonempty.any():
        # Empty segments consume no elements, so the non-empty segments are
        # contiguous in `values` and a single reduceat call covers them all.
        result[nonempty] = ufunc.reduceat(values, starts[nonempty])
    return result


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    """Compressed sparse row matrix.

    ``indptr`` has length ``n_rows + 1``; row ``i`` stores columns
    ``indices[indptr[i]:indptr[i+1]]`` with matching ``values``.
    """

    n_rows: int
    n_cols: int
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray

    @property
    def nnz(self):
        return int(self.indptr[-1])

    @cached_property
    def row_degrees(self):
        return _freeze(np.diff(self.indptr))

    @cached_property
    def coo_row_ids(self):
        """Row id of every stored nonzero (coordinate-format row array)."""
        return _freeze(np.repeat(np.arange(self.n_rows, dtype=np.int64), self.row_degrees))

    def row_slice(self, i):
        """Column ids and values of row ``i`` (views, no copy)."""
        s, e = int(self.indptr[i]), int(self.indptr[i + 1])
        return self.indices[s:e], self.values[s:e]

    def with_values(self, values):
        """Same sparsity pattern with replaced values (caller keeps them nonzero)."""
        values = _value_array(values)
        if values.size != self.indices.size:
            raise ValueError("replacement values must match nnz")
        return CsrMatrix(self.n_rows, self.n_cols, self.indptr, self.indices,
                         _freeze(values.copy()))


@dataclass(frozen=True, eq=False)
class CooMatrix:
    """Coordinate-format matrix, sorted by (row, col) with no duplicate pairs."""

    n_rows: int
    n_cols: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @property
    def nnz(self):
        return int(self.rows.size)


class NormKind(str, Enum):
    L0 = "l0"
    L1 = "l1"
    L2 = "l2"
    L2_SQUARED = "l2sq"


@dataclass(frozen=True, eq=False)
class NormVector:
    """Per-row norms of one kind; length equals the matrix row count."""

    kind: NormKind
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class DegreeStats:
    min_degree: int
    max_degree: int
    mean_degree: float
    histogram: np.ndarray  # histogram[d] = number of rows with degree d


def validate_and_canonicalize(indptr, indices, values, *, n_cols, n_rows=None):
    """Validate a raw CSR triple and return the canonical matrix.

    Within each row, column ids are sorted ascending, duplicate columns are
    coalesced by summation, and entries whose (coalesced) value is zero are
    dropped.

    Raises :class:`NegativeOffset`, :class:`NonMonotonicIndptr`, or
    :class:`IndexOutOfBounds` (each naming the offending row) on invalid
    input, and ``ValueError`` when array lengths are inconsistent.
    """
    indptr = _index_array(indptr)
    indices = _index_array(indices)
    values = _value_array(values)
    if n_rows is None:
        n_rows = indptr.size - 1
    n_rows = int(n_rows)
    n_cols = int(n_cols)
    if n_rows < 0 or n_cols < 0:
        raise ValueError("matrix dimensions must be non-negative")
    if indptr.size != n_rows + 1:
        raise ValueError(f"indptr length {indptr.size} does not match {n_rows} rows")
    if indices.size != values.size:
        raise ValueError("indices and values must have equal length")

    neg = indptr < 0
    if neg.any():
        pos = int(np.argmax(neg))
        raise NegativeOffset(row=max(0, min(pos, n_rows - 1)), offset=int(indptr[pos]))
    if indptr[0] != 0:
        raise NonMonotonicIndptr(0, f"indptr[0] is {int(indptr[0])}, expected 0")
    degrees = np.diff(indptr)
    dec = degrees < 0
    if dec.any():
        row = int(np.argmax(dec))
        raise NonMonotonicIndptr(row, f"indptr decreases at row {row}")
    if int(indptr[-1]) != indices.size:
        raise ValueError(
            f"indptr[-1] = {int(indptr[-1])} but {indices.size} entries supplied")

    oob = (indices < 0) | (indices >= n_cols)
    if oob.any():
        pos = int(np.argmax(oob))
        row = int(np.searchsorted(indptr, pos, side="right") - 1)
        raise IndexOutOfBounds(row=row, column=int(indices[pos]), n_cols=n_cols)

    rows = np.repeat(np.arange(n_rows, dtype=np.int64), degrees)
    order = np.lexsort((indices, rows))
    rows = rows[order]
    cols = indices[order]
    vals = values[order]
    if cols.size:
        head = np.empty(cols.size, dtype=bool)
        head[0] = True
        head[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        starts = np.flatnonzero(head)
        vals = np.add.reduceat(vals, starts)
        rows = rows[head]
        cols = cols[head]
        keep = vals != 0.0
        rows = rows[keep]
        cols = cols[keep]
        vals = vals[keep]

    new_indptr = np.zeros(n_rows + 1, dtype=np.int64)
    if rows.size:
        np.cumsum(np.bincount(rows, minlength=n_rows), out=new_indptr[1:])
    return CsrMatrix(n_rows, n_cols, _freeze(new_indptr), _freeze(cols), _freeze(vals))


def from_dense(dense):
    """Sparsify a dense 2-D array (zeros become structurally absent)."""
    dense = np.asarray(dense, dtype=np.float64)
    if dense.ndim != 2:
        raise ValueError("expected a 2-D array")
    rows, cols = np.nonzero(dense)
    vals = dense[rows, cols]
    n_rows, n_cols = dense.shape
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    if rows.size:
        np.cumsum(np.bincount(rows, minlength=n_rows), out=indptr[1:])
    return CsrMatrix(n_rows, n_cols, _freeze(indptr),
                     _freeze(cols.astype(np.int64)), _freeze(vals.astype(np.float64)))


def csr_to_coo(m):
    """Expand a canonical CSR matrix into its coordinate view."""
    return CooMatrix(m.n_rows, m.n_cols,
                     _freeze(m.coo_row_ids.copy()),
                     _freeze(m.indices.copy()),
                     _freeze(m.values.copy()))


def coo_to_csr(coo):
    """Rebuild the CSR form of a canonical coordinate matrix."""
    rows = _index_array(coo.rows)
    cols = _index_array(coo.cols)
    vals = _value_array(coo.values)
    if rows.size:
        if (cols < 0).any() or (cols >= coo.n_cols).any() or \
           (rows < 0).any() or (rows >= coo.n_rows).any():
            raise ValueError("coordinate ids out of bounds")
        keys = rows * coo.n_cols + cols
        if (np.diff(keys) <= 0).any():
            raise ValueError("coordinates must be sorted by (row, col) without duplicates")
    indptr = np.zeros(coo.n_rows + 1, dtype=np.int64)
    if rows.size:
        np.cumsum(np.bincount(rows, minlength=coo.n_rows), out=indptr[1:])
    return CsrMatrix(coo.n_rows, coo.n_cols, _freeze(indptr),
                     _freeze(cols.copy()), _freeze(vals.copy()))


def slice_rows(m, start, stop):
    """Row range [start, stop) as a CSR matrix (shares column/value storage)."""
    if not (0 <= start <= stop <= m.n_rows):
        raise ValueError(f"invalid row range [{start}, {stop}) for {m.n_rows} rows")
    lo, hi = int(m.indptr[start]), int(m.indptr[stop])
    indptr = (m.indptr[start:stop + 1] - lo).astype(np.int64)
    return CsrMatrix(stop - start, m.n_cols, _freeze(indptr),
                     m.indices[lo:hi], m.values[lo:hi])


def row_norms(m, kind):
    """Per-row norms; empty rows yield 0."""
    kind = NormKind(kind)
    if kind is NormKind.L0:
        vals = m.row_degrees.astype(np.float64)
    elif kind is NormKind.L1:
        vals = segment_reduce(np.abs(m.values), m.indptr, np.add, 0.0)
    elif kind is NormKind.L2_SQUARED:
        vals = segment_reduce(m.values * m.values, m.indptr, np.add, 0.0)
    else:
        vals = np.sqrt(segment_reduce(m.values * m.values, m.indptr, np.add, 0.0))
    return NormVector(kind, _freeze(vals))


def row_signed_sums(m):
    """Per-row signed sums (equals the L1 norm only on non-negative data)."""
    return _freeze(segment_reduce(m.values, m.indptr, np.add, 0.0))


def degree_stats(m):
    """Exact statistics over row degrees."""
    degrees = m.row_degrees
    if degrees.size == 0:
        return DegreeStats(0, 0, 0.0, _freeze(np.zeros(1, dtype=np.int64)))
    return DegreeStats(
        int(degrees.min()),
        int(degrees.max()),
        float(degrees.mean()),
        _freeze(np.bincount(degrees)),
    )
