import numpy as np
import pytest

from nbm.core import Clustering, NbmParameters, build_probability
from nbm.dcbm_cluster import (
    cluster_communities,
    k_median,
    l1_normalize_columns,
    leading_eigenpairs,
    rank_k_approx,
)
from nbm.generator import GeneratorConfig, generate_network
from nbm.lloyd import lloyd_single, plus_plus_init
from nbm.metrics import clustering_error
from nbm.oracle import exhaustive_k_median


def sym(rng, n):
    M = rng.normal(size=(n, n))
    return (M + M.T) / 2


class TestRankK:
    def test_rank_one_fixed_point(self):
        v = np.random.default_rng(0).normal(size=6)
        M = np.outer(v, v)
        np.testing.assert_allclose(rank_k_approx(M, 1), M, atol=1e-10)

    def test_full_rank(self):
        M = sym(np.random.default_rng(1), 5)
        np.testing.assert_allclose(rank_k_approx(M, 5), M, atol=1e-12)

    def test_eckart_young(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            M = sym(rng, 8)
            lam = np.sort(np.abs(np.linalg.eigvalsh(M)))[::-1]
            resid = np.sum((M - rank_k_approx(M, 3)) ** 2)
            assert np.isclose(resid, np.sum(lam[3:] ** 2), rtol=1e-9)

    def test_residual_non_increasing(self):
        M = sym(np.random.default_rng(3), 10)
        resid = [np.linalg.norm(M - rank_k_approx(M, k)) for k in range(1, 11)]
        assert np.all(np.diff(resid) <= 1e-12)

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            rank_k_approx(np.eye(3), 0)

    def test_tie_order_and_signs(self):
        M = np.diag([2.0, -2.0, 1.0])
        vals, vecs = leading_eigenpairs(M, 3)
        assert vals.tolist() == [2.0, -2.0, 1.0]
        for j in range(3):
            first = vecs[np.flatnonzero(np.abs(vecs[:, j]) > 1e-12)[0], j]
            assert first > 0


class TestNormalize:
    def test_examples(self):
        out = l1_normalize_columns(np.array([[2.0, 0.0, 3.0], [-2.0, 0.0, 3.0]]))
        np.testing.assert_allclose(out[:, 0], [0.5, -0.5])
        np.testing.assert_array_equal(out[:, 1], [0.0, 0.0])
        np.testing.assert_allclose(out[:, 2], [0.5, 0.5])

    def test_unit_l1_norm(self):
        M = np.random.default_rng(4).normal(size=(5, 7))
        np.testing.assert_allclose(np.abs(l1_normalize_columns(M)).sum(axis=0), 1.0)


class TestKMedian:
    def test_two_constants(self):
        X = np.concatenate([np.zeros((5, 2)), np.full((4, 2), 10.0)])
        res = k_median(X, 2, np.random.default_rng(0))
        assert clustering_error([0] * 5 + [1] * 4, res.labels) == 0

    def test_one_point_per_cluster(self):
        X = np.random.default_rng(1).normal(size=(6, 2))
        res = k_median(X, 6, np.random.default_rng(1))
        assert res.cost == 0.0
        assert sorted(res.labels.tolist()) == list(range(6))

    def test_matches_exhaustive_search(self):
        rng = np.random.default_rng(2)
        for trial in range(3):
            centers = rng.uniform(-10, 10, size=(3, 2))
            X = np.concatenate([c + rng.normal(scale=0.4, size=(4, 2)) for c in centers])
            best, _ = exhaustive_k_median(X, 3)
            res = k_median(X, 3, np.random.default_rng(trial))
            assert np.isclose(res.cost, best, rtol=1e-12)

    def test_cost_monotone(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(60, 3))
        for metric in ("cityblock", "sqeuclidean"):
            centers = plus_plus_init(X, 4, rng, metric)
            _, _, history, _ = lloyd_single(X, centers, metric)
            assert np.all(np.diff(history) <= 1e-12)

    def test_no_empty_clusters_with_duplicates(self):
        X = np.zeros((8, 2))
        X[:2] = 1.0
        res = k_median(X, 4, np.random.default_rng(4))
        assert np.all(np.bincount(res.labels, minlength=4) > 0)


class TestClusterCommunities:
    def test_single_community(self):
        res = cluster_communities(np.zeros((4, 4)), 1, np.random.default_rng(0))
        assert np.all(res.labels == 0)

    def test_noiseless_dcbm_recovery(self):
        for seed in range(5):
            net = generate_network(GeneratorConfig(60, 3, 1, 0.6, seed=seed))
            res = cluster_communities(net.P.entries, 3, np.random.default_rng(seed))
            assert clustering_error(net.z.labels, res.labels) == 0

    def test_noiseless_meta_block(self):
        net = generate_network(GeneratorConfig(80, 4, 2, 0.6, seed=1))
        meta = net.c.labels[net.z.labels]
        idx = np.flatnonzero(meta == 0)
        res = cluster_communities(net.P.entries[np.ix_(idx, idx)], 2, np.random.default_rng(1))
        assert clustering_error(net.z.labels[idx], res.labels) == 0

    def test_relabeling_invariance(self):
        # noiseless input is recovered exactly, so both orderings must agree
        net = generate_network(GeneratorConfig(90, 3, 1, 0.6, seed=2))
        A = net.P.entries
        perm = np.random.default_rng(5).permutation(90)
        a = cluster_communities(A, 3, np.random.default_rng(9))
        b = cluster_communities(A[np.ix_(perm, perm)], 3, np.random.default_rng(9))
        assert clustering_error(a.labels[perm], b.labels) == 0

    def test_isolated_nodes_are_placed(self):
        z = Clustering(np.repeat([0, 1], 5), 2)
        c = Clustering(np.array([0, 0]), 1)
        B = np.array([[0.8, 0.1], [0.1, 0.8]])
        P = build_probability(NbmParameters(B, np.ones((10, 1)), z, c)).entries.copy()
        P[0, :] = 0
        P[:, 0] = 0
        res = cluster_communities(P, 2, np.random.default_rng(0))
        assert res.n_clusters == 2 and len(res) == 10
