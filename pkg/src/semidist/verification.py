"""Randomized engine-vs-reference comparison behind the verify command."""

from dataclasses import dataclass

import numpy as np

from . import oracle
from .metrics import BINARY_PREFERRED, metric_registry
from .metrics import pairwise_distances
from .sparse import from_dense

RTOL = 1e-6
ATOL = 1e-9


@dataclass
class VerifyResult:
    metric: str
    trials: int
    failures: int
    max_abs_err: float

    @property
    def passed(self):
        return self.failures == 0


def random_instance(rng, name, max_rows=40, max_cols=32,
                    density_range=(0.05, 0.5)):
    """Random matrix pair honoring the metric's domain.

    Binary patterns for the set-semantics metrics, non-negative floats
    bounded away from zero otherwise; for kl the right matrix is fully dense
    so its rows cover every query support.
    """
    m = int(rng.integers(1, max_rows + 1))
    n = int(rng.integers(1, max_rows + 1))
    k = int(rng.integers(1, max_cols + 1))
    density = float(rng.uniform(*density_range))
    mask_a = rng.random((m, k)) < density
    mask_b = rng.random((n, k)) < density
    if name in BINARY_PREFERRED:
        da = mask_a.astype(np.float64)
        db = mask_b.astype(np.float64)
    else:
        da = np.where(mask_a, rng.uniform(0.1, 1.0, (m, k)), 0.0)
        if name == "kl":
            db = rng.uniform(0.1, 1.0, (n, k))
        else:
            db = np.where(mask_b, rng.uniform(0.1, 1.0, (n, k)), 0.0)
    return from_dense(da), from_dense(db)


def verify_metric(name, trials=20, max_rows=40, max_cols=32, seed=0,
                  strategy=None, rtol=RTOL, atol=ATOL):
    """Compare the engine against the dense reference on random instances."""
    rng = np.random.default_rng(seed)
    p = None
    failures = 0
    max_abs = 0.0
    for _ in range(int(trials)):
        a, b = random_instance(rng, name, max_rows, max_cols)
        if name == "minkowski":
            p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        spec = metric_registry(name, p=p)
        got = pairwise_distances(a, b, spec, strategy=strategy)
        want = oracle.oracle_pairwise(a, b, name, p=p)
        max_abs = max(max_abs, float(np.max(np.abs(got - want))) if got.size else 0.0)
        if not np.allclose(got, want, rtol=rtol, atol=atol):
            failures += 1
    return VerifyResult(name, int(trials), failures, max_abs)
