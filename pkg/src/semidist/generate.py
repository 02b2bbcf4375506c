"""Synthetic sparse datasets with controllable degree distributions.

Row degrees follow either a fixed target (``uniform``) or a truncated Zipf
law (``zipf``), the skewed regime the load-balanced engine is built for.
Columns are drawn uniformly with replacement and duplicate coordinates are
dropped, so realized degrees sit slightly under the target.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .sparse import CooMatrix, coo_to_csr

VALUE_DISTRIBUTIONS = ("uniform01", "tfidf")


@dataclass(frozen=True)
class GenSpec:
    n_rows: int
    n_cols: int
    degree_dist: str               # "uniform" or "zipf"
    degree: int = 0                # uniform target degree
    zipf_s: float = 0.0            # zipf exponent, > 1
    zipf_max_degree: int = 0
    value_dist: str = "uniform01"
    seed: int = 0

    def validate(self):
        if self.n_rows < 0 or self.n_cols < 0:
            raise InvalidSpec("dimensions must be non-negative")
        if self.value_dist not in VALUE_DISTRIBUTIONS:
            raise InvalidSpec(f"unknown value distribution '{self.value_dist}'")
        if self.degree_dist == "uniform":
            if self.degree < 0 or self.degree > self.n_cols:
                raise InvalidSpec(f"uniform degree {self.degree} outside "
                                  f"[0, {self.n_cols}]")
        elif self.degree_dist == "zipf":
            if self.zipf_s <= 1.0:
                raise InvalidSpec("zipf exponent must be > 1")
            if self.zipf_max_degree < 1:
                raise InvalidSpec("zipf max degree must be >= 1")
        else:
            raise InvalidSpec(f"unknown degree distribution '{self.degree_dist}'")


def parse_degree_dist(text):
    """Parse CLI specs 'uniform:D' and 'zipf:S:MAXDEG' into GenSpec fields."""
    parts = str(text).split(":")
    try:
        if parts[0] == "uniform" and len(parts) == 2:
            return {"degree_dist": "uniform", "degree": int(parts[1])}
        if parts[0] == "zipf" and len(parts) == 3:
            return {"degree_dist": "zipf", "zipf_s": float(parts[1]),
                    "zipf_max_degree": int(parts[2])}
    except ValueError:
        pass
    raise InvalidSpec(f"cannot parse degree distribution '{text}' "
                      "(expected uniform:D or zipf:S:MAXDEG)")


def generate(spec):
    """Reproducible random CSR matrix for the given spec."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    if spec.degree_dist == "uniform":
        degrees = np.full(spec.n_rows, spec.degree, dtype=np.int64)
    else:
        cap = min(spec.zipf_max_degree, spec.n_cols)
        degrees = np.minimum(rng.zipf(spec.zipf_s, spec.n_rows), cap).astype(np.int64)

    rows = np.repeat(np.arange(spec.n_rows, dtype=np.int64), degrees)
    cols = rng.integers(0, max(1, spec.n_cols), size=rows.size, dtype=np.int64)
    keys = np.unique(rows * spec.n_cols + cols) if rows.size else rows
    rows = keys // max(1, spec.n_cols)
    cols = keys % max(1, spec.n_cols)

    if spec.value_dist == "uniform01":
        vals = rng.random(keys.size)
    else:
        vals = rng.lognormal(0.0, 1.0, keys.size)
    nonzero = vals != 0.0
    rows, cols, vals = rows[nonzero], cols[nonzero], vals[nonzero]
    coo = CooMatrix(spec.n_rows, spec.n_cols, rows, cols, vals)
    return coo_to_csr(coo)
