"""Matrix Market coordinate-format I/O and result writers.

The reader accepts real, integer, and pattern fields with general or
symmetric storage, converts 1-based indices, mirrors symmetric entries, and
canonicalizes the result. Floats are written with 17 significant digits so
that a write/read round trip is bitwise exact.
"""

import json

import numpy as np

from .errors import ParseError, UnsupportedField
from .knn import NeighborResult
from .sparse import validate_and_canonicalize


def _fmt(v):
    return f"{v:.17g}"


def read_matrix_market(path):
    """Parse a Matrix Market coordinate file into a canonical CSR matrix."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise ParseError(1, "empty file")
        parts = header.strip().split()
        if len(parts) < 5 or parts[0].lower() != "%%matrixmarket":
            raise ParseError(1, "missing MatrixMarket header")
        obj, fmt, field, symmetry = (p.lower() for p in parts[1:5])
        if obj != "matrix":
            raise UnsupportedField(f"object '{obj}' not supported")
        if fmt != "coordinate":
            raise UnsupportedField(f"format '{fmt}' not supported (coordinate only)")
        if field not in ("real", "integer", "pattern"):
            raise UnsupportedField(f"field '{field}' not supported")
        if symmetry not in ("general", "symmetric"):
            raise UnsupportedField(f"symmetry '{symmetry}' not supported")
        pattern = field == "pattern"
        want = 2 if pattern else 3

        line_no = 1
        size_line = None
        for line in fh:
            line_no += 1
            text = line.strip()
            if not text or text.startswith("%"):
                continue
            size_line = text
            break
        if size_line is None:
            raise ParseError(line_no, "missing size line")
        tokens = size_line.split()
        if len(tokens) != 3:
            raise ParseError(line_no, "size line must be 'rows cols nnz'")
        try:
            n_rows, n_cols, declared = (int(t) for t in tokens)
        except ValueError:
            raise ParseError(line_no, "size line must contain integers") from None
        if n_rows < 0 or n_cols < 0 or declared < 0:
            raise ParseError(line_no, "sizes must be non-negative")
        if symmetry == "symmetric" and n_rows != n_cols:
            raise ParseError(line_no, "symmetric storage requires a square matrix")

        rows = np.empty(declared, dtype=np.int64)
        cols = np.empty(declared, dtype=np.int64)
        vals = np.empty(declared, dtype=np.float64)
        count = 0
        for line in fh:
            line_no += 1
            text = line.strip()
            if not text or text.startswith("%"):
                continue
            if count >= declared:
                raise ParseError(line_no, f"more than the declared {declared} entries")
            tokens = text.split()
            if len(tokens) != want:
                raise ParseError(line_no,
                                 f"expected {want} fields, found {len(tokens)}")
            try:
                i = int(tokens[0])
                j = int(tokens[1])
                v = 1.0 if pattern else float(tokens[2])
            except ValueError:
                raise ParseError(line_no, f"malformed entry '{text}'") from None
            if not (1 <= i <= n_rows) or not (1 <= j <= n_cols):
                raise ParseError(line_no, f"entry ({i}, {j}) outside "
                                          f"{n_rows} x {n_cols}")
            rows[count] = i - 1
            cols[count] = j - 1
            vals[count] = v
            count += 1
        if count < declared:
            raise ParseError(line_no, f"declared {declared} entries, found {count}")

    if symmetry == "symmetric" and count:
        off = rows != cols
        rows, cols = (np.concatenate([rows, cols[off]]),
                      np.concatenate([cols, rows[off]]))
        vals = np.concatenate([vals, vals[off]])

    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    if rows.size:
        np.cumsum(np.bincount(rows, minlength=n_rows), out=indptr[1:])
    return validate_and_canonicalize(indptr, cols, vals, n_cols=n_cols, n_rows=n_rows)


def write_matrix_market(m, path):
    """Write a CSR matrix as 'coordinate real general' with 1-based ids."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        fh.write(f"{m.n_rows} {m.n_cols} {m.nnz}\n")
        rows = m.coo_row_ids
        for r, c, v in zip(rows.tolist(), m.indices.tolist(), m.values.tolist()):
            fh.write(f"{r + 1} {c + 1} {_fmt(v)}\n")


def write_output(result, path, fmt="csv", header=False):
    """Write a distance matrix or NeighborResult as CSV or JSON."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported output format '{fmt}'")
    if isinstance(result, NeighborResult):
        _write_knn(result, path, fmt, header)
    else:
        _write_distances(np.asarray(result, dtype=np.float64), path, fmt, header)


def _write_distances(dist, path, fmt, header):
    if fmt == "json":
        payload = {"n_rows": dist.shape[0], "n_cols": dist.shape[1],
                   "distances": dist.tolist()}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
            fh.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(",".join(f"j{c}" for c in range(dist.shape[1])) + "\n")
        for row in dist:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_knn(result, path, fmt, header):
    if fmt == "json":
        records = [
            {"query_id": int(q), "neighbor_id": int(j), "distance": float(d)}
            for q in range(result.indices.shape[0])
            for j, d in zip(result.indices[q].tolist(), result.distances[q].tolist())
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(records, fh)
            fh.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write("query_id,neighbor_id,distance\n")
        for q in range(result.indices.shape[0]):
            for j, d in zip(result.indices[q].tolist(), result.distances[q].tolist()):
                fh.write(f"{q},{j},{_fmt(d)}\n")
