"""Shared helpers for the test suite."""

import numpy as np

from semidist import from_dense


def random_dense(rng, n_rows, n_cols, density, low=0.05, high=1.0, binary=False):
    mask = rng.random((n_rows, n_cols)) < density
    if binary:
        return mask.astype(np.float64)
    return np.where(mask, rng.uniform(low, high, (n_rows, n_cols)), 0.0)


def random_csr(rng, n_rows, n_cols, density, **kw):
    return from_dense(random_dense(rng, n_rows, n_cols, density, **kw))


def assert_csr_equal(a, b):
    assert a.n_rows == b.n_rows and a.n_cols == b.n_cols
    np.testing.assert_array_equal(a.indptr, b.indptr)
    np.testing.assert_array_equal(a.indices, b.indices)
    np.testing.assert_array_equal(a.values, b.values)
