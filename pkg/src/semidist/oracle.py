"""Dense brute-force reference formulas.

Everything here evaluates the plain textbook expression over all columns of
dense vectors, deliberately sharing no code with the sparse engine. Used by
tests and the verify command as the arbiter of correctness; not built for
speed.
"""

import numpy as np

from .errors import DomainError, MissingParam, SizeOverflow, UnknownMetric

DEFAULT_ELEMENT_CAP = 1 << 26

KL_SATURATION = 1e308


def densify(m, element_cap=DEFAULT_ELEMENT_CAP):
    """Exact dense materialization of a canonical CSR matrix."""
    if m.n_rows * m.n_cols > element_cap:
        raise SizeOverflow(
            f"{m.n_rows} x {m.n_cols} exceeds the {element_cap}-element cap")
    out = np.zeros((m.n_rows, m.n_cols), dtype=np.float64)
    if m.nnz:
        out[m.coo_row_ids, m.indices] = m.values
    return out


def _require_nonnegative(name, *vecs):
    for v in vecs:
        if (v < 0).any():
            raise DomainError(f"{name} requires non-negative inputs")


def manhattan(a, b):
    return float(np.sum(np.abs(a - b)))


def chebyshev(a, b):
    d = np.abs(a - b)
    return float(d.max()) if d.size else 0.0


def minkowski(a, b, p):
    return float(np.sum(np.abs(a - b) ** p) ** (1.0 / p))


def canberra(a, b):
    num = np.abs(a - b)
    den = np.abs(a) + np.abs(b)
    terms = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return float(terms.sum())


def hamming(a, b):
    k = a.size
    return float(np.count_nonzero(a != b) / k) if k else 0.0


def euclidean(a, b):
    return float(np.sqrt(np.sum((a - b) ** 2)))


def dot(a, b):
    return float(np.sum(a * b))


def cosine(a, b):
    na = np.sqrt(np.sum(a * a))
    nb = np.sqrt(np.sum(b * b))
    if na == 0.0 and nb == 0.0:
        return 0.0
    if na == 0.0 or nb == 0.0:
        return 1.0
    return float(1.0 - np.sum(a * b) / (na * nb))


def correlation(a, b):
    ac = a - a.mean() if a.size else a
    bc = b - b.mean() if b.size else b
    va = np.sum(ac * ac)
    vb = np.sum(bc * bc)
    if va == 0.0 or vb == 0.0:
        both_empty = not np.any(a) and not np.any(b)
        return 0.0 if both_empty else 1.0
    return float(1.0 - np.sum(ac * bc) / np.sqrt(va * vb))


def dice(a, b):
    ca = float(np.count_nonzero(a))
    cb = float(np.count_nonzero(b))
    if ca + cb == 0.0:
        return 0.0
    return float(1.0 - 2.0 * np.sum(a * b) / (ca + cb))


def jaccard(a, b):
    ca = float(np.count_nonzero(a))
    cb = float(np.count_nonzero(b))
    inter = float(np.sum(a * b))
    den = ca + cb - inter
    if den <= 0.0:
        return 0.0 if ca + cb == 0.0 else 1.0
    return float(1.0 - inter / den)


def russelrao(a, b):
    k = a.size
    return float((k - np.sum(a * b)) / k) if k else 0.0


def hellinger(a, b):
    _require_nonnegative("hellinger", a, b)
    coeff = float(np.sum(np.sqrt(a * b)))
    return float(1.0 - np.sqrt(coeff))


def kl_divergence(a, b, strict=True):
    """Sum of a*log(a/b) over the columns where a > 0."""
    _require_nonnegative("kl", a, b)
    mask = a > 0
    if np.any(mask & (b == 0)):
        if strict:
            raise DomainError("kl: support of the left vector is not covered by the right")
        return KL_SATURATION
    safe_b = np.where(mask, b, 1.0)
    safe_a = np.where(mask, a, 1.0)
    return float(np.sum(np.where(mask, a * np.log(safe_a / safe_b), 0.0)))


def jensen_shannon(a, b):
    _require_nonnegative("jensenshannon", a, b)
    mu = 0.5 * (a + b)
    safe_mu = np.where(mu > 0, mu, 1.0)
    la = np.where(a > 0, a * np.log(np.where(a > 0, a, 1.0) / safe_mu), 0.0)
    lb = np.where(b > 0, b * np.log(np.where(b > 0, b, 1.0) / safe_mu), 0.0)
    total = float(np.sum(la + lb))
    return float(np.sqrt(max(total, 0.0) / 2.0))


_DISPATCH = {
    "manhattan": manhattan,
    "chebyshev": chebyshev,
    "canberra": canberra,
    "hamming": hamming,
    "euclidean": euclidean,
    "dot": dot,
    "cosine": cosine,
    "correlation": correlation,
    "dice": dice,
    "jaccard": jaccard,
    "russelrao": russelrao,
    "hellinger": hellinger,
    "kl": kl_divergence,
    "jensenshannon": jensen_shannon,
    "minkowski": minkowski,
}


def oracle_distance(a, b, name, *, p=None, strict=True):
    """Evaluate one named distance between two dense vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("expected two equal-length 1-D vectors")
    name = name.lower()
    fn = _DISPATCH.get(name)
    if fn is None:
        raise UnknownMetric(f"no reference formula for '{name}'")
    if name == "minkowski":
        if p is None:
            raise MissingParam("minkowski requires p")
        return fn(a, b, p)
    if name == "kl":
        return fn(a, b, strict=strict)
    return fn(a, b)


def oracle_pairwise(a, b, name, *, p=None, strict=True):
    """Full m x n distance matrix via per-pair reference evaluation.

    Accepts CSR matrices (densified first) or dense arrays.
    """
    da = a if isinstance(a, np.ndarray) else densify(a)
    db = b if isinstance(b, np.ndarray) else densify(b)
    out = np.empty((da.shape[0], db.shape[0]), dtype=np.float64)
    for i in range(da.shape[0]):
        for j in range(db.shape[0]):
            out[i, j] = oracle_distance(da[i], db[j], name, p=p, strict=strict)
    return out


def min_plus_product(dense_a, dense_b):
    """Brute-force min-plus row product over the stored-column union.

    For each pair, minimizes a[c] + b[c] over the columns where either vector
    is nonzero; a pair with no such column yields +inf (the reduce identity).
    """
    da = np.asarray(dense_a, dtype=np.float64)
    db = np.asarray(dense_b, dtype=np.float64)
    out = np.full((da.shape[0], db.shape[0]), np.inf)
    for i in range(da.shape[0]):
        for j in range(db.shape[0]):
            mask = (da[i] != 0) | (db[j] != 0)
            if mask.any():
                out[i, j] = np.min(da[i][mask] + db[j][mask])
    return out
