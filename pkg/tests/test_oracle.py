import numpy as np
import pytest

from semidist import DomainError, MissingParam, SizeOverflow, from_dense
from semidist.oracle import (
    densify,
    min_plus_product,
    oracle_distance,
    oracle_pairwise,
)


class TestDensify:
    def test_single_entry(self):
        from semidist import validate_and_canonicalize
        m = validate_and_canonicalize([0, 1], [2], [5.0], n_cols=3)
        np.testing.assert_array_equal(densify(m), [[0.0, 0.0, 5.0]])

    def test_empty_matrix(self):
        from semidist import validate_and_canonicalize
        m = validate_and_canonicalize([0, 0, 0], [], [], n_cols=2)
        np.testing.assert_array_equal(densify(m), np.zeros((2, 2)))

    def test_round_trip(self):
        dense = np.array([[0.0, 2.5, 0.0], [1.0, 0.0, -3.0]])
        np.testing.assert_array_equal(densify(from_dense(dense)), dense)

    def test_size_overflow(self):
        from semidist import validate_and_canonicalize
        m = validate_and_canonicalize([0, 0], [], [], n_cols=10)
        with pytest.raises(SizeOverflow):
            densify(m, element_cap=5)


class TestOracleDistances:
    def test_appendix_manhattan(self):
        assert oracle_distance([1, 0, 1], [0, 1, 0], "manhattan") == 3.0

    def test_chebyshev_by_hand(self):
        assert oracle_distance([1, 0, 1], [0, 1, 0], "chebyshev") == 1.0

    def test_canberra_identical(self):
        assert oracle_distance([1, 0], [1, 0], "canberra") == 0.0

    def test_canberra_zero_zero_terms_ignored(self):
        assert oracle_distance([1, 0, 0], [0, 0, 0], "canberra") == 1.0

    def test_hamming(self):
        assert oracle_distance([1, 0, 1, 1], [1, 1, 0, 1], "hamming") == 0.5

    def test_euclidean_345(self):
        assert oracle_distance([3, 0], [0, 4], "euclidean") == 5.0

    def test_minkowski_requires_p(self):
        with pytest.raises(MissingParam):
            oracle_distance([1.0], [0.0], "minkowski")
        np.testing.assert_allclose(
            oracle_distance([1, 0], [0, 1], "minkowski", p=2.0), np.sqrt(2.0))

    def test_cosine_orthogonal_and_degenerate(self):
        assert oracle_distance([1, 0], [0, 1], "cosine") == 1.0
        assert oracle_distance([0, 0], [0, 0], "cosine") == 0.0
        assert oracle_distance([0, 0], [1, 0], "cosine") == 1.0

    def test_dot(self):
        assert oracle_distance([1, 2], [3, 4], "dot") == 11.0

    def test_dice_jaccard_binary(self):
        a = [1, 1, 0, 0]
        b = [1, 0, 1, 0]
        np.testing.assert_allclose(oracle_distance(a, b, "dice"), 1 - 2 * 1 / 4)
        np.testing.assert_allclose(oracle_distance(a, b, "jaccard"), 1 - 1 / 3)

    def test_russelrao(self):
        np.testing.assert_allclose(
            oracle_distance([1, 1, 0, 0], [1, 1, 0, 0], "russelrao"), 0.5)

    def test_hellinger_identical_unit_mass(self):
        a = [0.25, 0.25, 0.25, 0.25]
        np.testing.assert_allclose(oracle_distance(a, a, "hellinger"), 0.0,
                                   atol=1e-12)

    def test_kl_strict_and_permissive(self):
        a = [0.5, 0.5]
        b = [1.0, 0.0]
        with pytest.raises(DomainError):
            oracle_distance(a, b, "kl")
        assert oracle_distance(a, b, "kl", strict=False) == 1e308
        covered = oracle_distance([0.5, 0.5], [0.25, 0.75], "kl")
        np.testing.assert_allclose(
            covered, 0.5 * np.log(0.5 / 0.25) + 0.5 * np.log(0.5 / 0.75))

    def test_jensen_shannon_self_and_disjoint(self):
        np.testing.assert_allclose(
            oracle_distance([0.5, 0.5], [0.5, 0.5], "jensenshannon"), 0.0, atol=1e-12)
        d = oracle_distance([1.0, 0.0], [0.0, 1.0], "jensenshannon")
        np.testing.assert_allclose(d, np.sqrt(np.log(2.0)))

    def test_negative_input_rejected_for_probability_metrics(self):
        for name in ("hellinger", "kl", "jensenshannon"):
            with pytest.raises(DomainError):
                oracle_distance([-1.0, 0.5], [0.5, 0.5], name)


class TestPairwiseAndMinPlus:
    def test_pairwise_shape(self):
        a = from_dense([[1.0, 0.0], [0.0, 1.0]])
        b = from_dense([[1.0, 1.0]])
        out = oracle_pairwise(a, b, "manhattan")
        np.testing.assert_allclose(out, [[1.0], [1.0]])

    def test_min_plus_by_hand(self):
        a = np.array([[2.0, 0.0]])
        b = np.array([[1.0, 5.0], [0.0, 0.0]])
        out = min_plus_product(a, b)
        # union columns of (a, b0) = {0, 1}: min(2+1, 0+5) = 3
        # union columns of (a, b1) = {0}: 2+0 = 2
        np.testing.assert_array_equal(out, [[3.0, 2.0]])

    def test_min_plus_empty_union_is_inf(self):
        out = min_plus_product(np.zeros((1, 3)), np.zeros((1, 3)))
        assert out[0, 0] == np.inf
