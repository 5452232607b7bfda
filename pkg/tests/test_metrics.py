import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbm.metrics import (
    clustering_error,
    confusion_matrix,
    estimation_error,
    model_for,
    n_parameters,
)
from nbm.core import ModelKind
from nbm.oracle import brute_force_clustering_error


class TestClusteringError:
    def test_identical(self):
        assert clustering_error([0, 1, 2, 1], [0, 1, 2, 1]) == 0

    def test_swapped_labels(self):
        assert clustering_error([0, 0, 1, 1], [1, 1, 0, 0]) == 0

    def test_one_of_six(self):
        assert clustering_error([0, 0, 0, 1, 1, 1], [0, 0, 1, 1, 1, 1]) == pytest.approx(1 / 6)

    def test_padding_for_unequal_counts(self):
        # the extra estimated cluster is unmatched, so its node counts as an error
        assert clustering_error([0, 0, 1, 1], [0, 0, 1, 2]) == pytest.approx(0.25)
        assert confusion_matrix([0, 0, 1, 1], [0, 0, 1, 2]).shape == (3, 3)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            clustering_error([0, 1], [0, 1, 1])

    def test_label_range(self):
        with pytest.raises(ValueError):
            clustering_error([0, 3], [0, 1], K=2)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_properties(data):
    K = data.draw(st.integers(1, 5))
    n = data.draw(st.integers(1, 25))
    a = np.array(data.draw(st.lists(st.integers(0, K - 1), min_size=n, max_size=n)))
    b = np.array(data.draw(st.lists(st.integers(0, K - 1), min_size=n, max_size=n)))
    err = clustering_error(a, b, K)
    assert 0 <= err <= 1
    assert err == pytest.approx(clustering_error(b, a, K))
    perm = np.array(data.draw(st.permutations(range(K))))
    assert err == pytest.approx(clustering_error(a, perm[b], K))
    assert err == pytest.approx(brute_force_clustering_error(a, b, K))
    assert clustering_error(a, perm[a], K) == 0


class TestEstimationError:
    def test_zero(self):
        P = np.zeros((4, 4))
        assert estimation_error(P, P, "NBM", K=2, L=1) == 0

    def test_formula(self):
        rng = np.random.default_rng(0)
        P = rng.random((10, 10))
        P_hat = P + 0.01
        expected = (np.sum(0.01**2 * np.ones((10, 10))) + 2 * P.mean() * (10 * 2 + 6 - 6)) / 100
        assert estimation_error(P_hat, P, "NBM", K=3, L=2) == pytest.approx(expected)

    def test_unknown_model(self):
        with pytest.raises(ValueError, match="unknown"):
            estimation_error(np.zeros((2, 2)), np.zeros((2, 2)), "ERGM", K=1)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            estimation_error(np.zeros((2, 2)), np.zeros((3, 3)), "DCBM", K=1)


class TestParameterCounts:
    def test_formulas(self):
        assert n_parameters("DCBM", 900, 6) == 900 + 21 - 1
        assert n_parameters("NBM", 900, 6, 2) == 1800 + 21 - 12
        assert n_parameters("PABM", 900, 6, 6) == 5400

    def test_model_for(self):
        assert model_for(6, 1) is ModelKind.DCBM
        assert model_for(6, 2) is ModelKind.NBM
        assert model_for(6, 6) is ModelKind.PABM
