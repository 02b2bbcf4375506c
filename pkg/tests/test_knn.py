import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semidist import (
    DimensionMismatch,
    KTooLarge,
    from_dense,
    kneighbors,
    kneighbors_detail,
    metric_registry,
    pairwise_distances,
    plan_batches,
    select_topk,
)

from util import random_csr


class TestSelectTopk:
    def test_by_hand(self):
        vals, idx = select_topk([3.0, 1.0, 2.0], 2)
        np.testing.assert_allclose(vals, [1.0, 2.0])
        np.testing.assert_array_equal(idx, [1, 2])

    def test_ties_break_by_index(self):
        vals, idx = select_topk([1.0, 1.0, 1.0], 2)
        np.testing.assert_allclose(vals, [1.0, 1.0])
        np.testing.assert_array_equal(idx, [0, 1])

    def test_k_too_large(self):
        with pytest.raises(KTooLarge):
            select_topk([1.0], 2)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_matches_full_sort_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 50))
        row = rng.choice([0.1, 0.4, 0.4, 0.9, 1.3], size=n)  # force ties
        k = int(rng.integers(1, n + 1))
        vals, idx = select_topk(row, k)
        order = sorted(range(n), key=lambda t: (row[t], t))[:k]
        np.testing.assert_array_equal(idx, order)
        np.testing.assert_allclose(vals, row[order])
        assert (np.diff(vals) >= 0).all()


class TestKneighbors:
    def test_self_query_returns_self_first(self):
        rng = np.random.default_rng(0)
        x = random_csr(rng, 25, 10, 0.5)
        res = kneighbors(x, x, 1, metric_registry("euclidean"))
        np.testing.assert_array_equal(res.indices[:, 0], np.arange(25))
        np.testing.assert_allclose(res.distances[:, 0], 0.0, atol=1e-9)

    def test_small_binary_manhattan_against_sort_oracle(self):
        x = from_dense([[1, 0, 1, 0],
                        [1, 1, 0, 0],
                        [0, 0, 1, 1],
                        [1, 0, 0, 0],
                        [0, 1, 1, 1]])
        spec = metric_registry("manhattan")
        res = kneighbors(x, x, 2, spec)
        dists = pairwise_distances(x, x, spec)
        for q in range(5):
            order = sorted(range(5), key=lambda j: (dists[q, j], j))[:2]
            np.testing.assert_array_equal(res.indices[q], order)
            np.testing.assert_allclose(res.distances[q], dists[q, order])

    def test_batching_invariance(self):
        rng = np.random.default_rng(1)
        x = random_csr(rng, 18, 12, 0.4)
        spec = metric_registry("cosine")
        base = kneighbors(x, x, 3, spec, batch_rows=18)
        for rows in (1, 2, 5):
            res = kneighbors(x, x, 3, spec, batch_rows=rows)
            np.testing.assert_array_equal(res.indices, base.indices)
            np.testing.assert_array_equal(res.distances, base.distances)

    def test_distances_non_decreasing_and_unique_ids(self):
        rng = np.random.default_rng(2)
        x = random_csr(rng, 20, 9, 0.5)
        res = kneighbors(x, x, 5, metric_registry("manhattan"))
        assert (np.diff(res.distances, axis=1) >= 0).all()
        for row in res.indices:
            assert len(set(row.tolist())) == row.size

    def test_k_too_large_and_dim_mismatch(self):
        rng = np.random.default_rng(3)
        x = random_csr(rng, 5, 8, 0.5)
        with pytest.raises(KTooLarge):
            kneighbors(x, x, 6, metric_registry("euclidean"))
        y = random_csr(rng, 5, 9, 0.5)
        with pytest.raises(DimensionMismatch):
            kneighbors(x, y, 2, metric_registry("euclidean"))

    def test_detail_reports_topk_time(self):
        rng = np.random.default_rng(4)
        x = random_csr(rng, 10, 8, 0.5)
        _, report, timings, plan = kneighbors_detail(x, x, 2,
                                                     metric_registry("manhattan"))
        assert timings["topk"] >= 0.0
        assert plan.n_batches >= 1
        assert report.workspace_elements <= x.nnz


class TestBatchPlan:
    def test_explicit_batch_rows(self):
        plan = plan_batches(100, 50, batch_rows=7)
        assert plan.batch_rows == 7
        assert plan.n_batches == 15  # ceil(100/7)

    def test_budget_driven_default(self):
        plan = plan_batches(10 ** 6, 10 ** 4, memory_budget_bytes=256 << 20)
        assert plan.batch_rows * 10 ** 4 * 8 <= 256 << 20
        assert plan.batch_rows >= 1

    def test_covers_queries_exactly(self):
        plan = plan_batches(10, 5, batch_rows=4)
        spans = [(s, min(s + plan.batch_rows, 10))
                 for s in range(0, 10, plan.batch_rows)]
        assert spans[0][0] == 0 and spans[-1][1] == 10
        covered = sum(e - s for s, e in spans)
        assert covered == 10
