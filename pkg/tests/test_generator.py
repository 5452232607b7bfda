import numpy as np
import pytest

from nbm.core import block_average, derive_rng, model_kind, ModelKind
from nbm.generator import (
    GeneratorConfig,
    UnbalancedConfigError,
    _block_maxima,
    generate_B,
    generate_h_matrix,
    generate_network,
    sample_adjacency,
)


@pytest.mark.parametrize(
    "n,K,L,omega",
    [(10, 3, 1, 0.6), (12, 4, 3, 0.6), (12, 4, 2, 1.0), (12, 4, 2, 0.0), (8, 4, 4, 0.5)],
)
def test_unbalanced_or_invalid_configs_rejected(n, K, L, omega):
    with pytest.raises(UnbalancedConfigError):
        GeneratorConfig(n, K, L, omega)


class TestHeterogeneity:
    @pytest.mark.parametrize("n,K,L", [(60, 6, 2), (90, 6, 3), (40, 4, 1), (36, 6, 6), (63, 3, 3)])
    def test_scaling(self, n, K, L):
        H = generate_h_matrix(GeneratorConfig(n, K, L, 0.5), np.random.default_rng(0))
        m = n // K
        sums = H.reshape(K, m, L).sum(axis=1)
        np.testing.assert_allclose(sums, m, atol=1e-12)

    def test_column_patterns(self):
        cfg = GeneratorConfig(36, 3, 3, 0.5)
        H = generate_h_matrix(cfg, np.random.default_rng(1))
        block = H[:12]
        # first column ascending, second descending
        assert np.all(np.diff(block[:, 0]) >= 0)
        assert np.all(np.diff(block[:, 1]) <= 0)
        # third column is the second with its sub-blocks rotated by one
        second = block[:, 1] / block[:, 1].sum()
        third = block[:, 2] / block[:, 2].sum()
        parts = np.array_split(second, 3)
        np.testing.assert_allclose(third, np.concatenate(parts[1:] + parts[:1]))

    def test_columns_linearly_independent(self):
        cfg = GeneratorConfig(120, 6, 3, 0.5)
        H = generate_h_matrix(cfg, np.random.default_rng(2))
        for k in range(6):
            stack = H[k * 20:(k + 1) * 20]
            for a in range(3):
                for b in range(a + 1, 3):
                    pair = stack[:, [a, b]]
                    assert np.linalg.det(pair.T @ pair) > 1e-8

    def test_single_column(self):
        H = generate_h_matrix(GeneratorConfig(30, 3, 1, 0.5), np.random.default_rng(3))
        assert H.shape == (30, 1)


class TestBlockMatrix:
    def test_probabilities_do_not_exceed_one(self):
        for seed in range(20):
            net = generate_network(GeneratorConfig(60, 6, 2, 0.6, seed=seed))
            assert net.P.entries.max() <= 1.0

    def test_symmetric_and_row_maximal_before_omega(self):
        cfg = GeneratorConfig(60, 6, 2, 0.999999)
        H = generate_h_matrix(cfg, np.random.default_rng(4))
        h_max = _block_maxima(H, 6, 2)
        B = generate_B(cfg, h_max, np.random.default_rng(5))
        np.testing.assert_array_equal(B, B.T)
        B_tilde = B * h_max**2
        off = ~np.eye(6, dtype=bool)
        B_tilde[off] /= cfg.omega
        assert np.all(B_tilde >= 0.35 - 1e-12) and np.all(B_tilde <= 1 + 1e-12)
        assert np.all(np.diag(B_tilde) >= B_tilde.max(axis=1) - 1e-12)

    def test_small_omega_is_nearly_block_diagonal(self):
        net = generate_network(GeneratorConfig(60, 3, 1, 0.01, seed=1))
        zl = net.z.labels
        same = zl[:, None] == zl[None, :]
        P = net.P.entries
        assert P[~same].mean() < 0.05 * P[same].mean()


class TestSampling:
    def test_degenerate_probabilities(self):
        rng = np.random.default_rng(0)
        assert sample_adjacency(np.zeros((10, 10)), rng).adjacency.sum() == 0
        full = sample_adjacency(np.ones((10, 10)), rng).adjacency
        np.testing.assert_array_equal(full, 1 - np.eye(10))

    def test_edge_count_concentrates(self):
        rng = np.random.default_rng(1)
        counts = [sample_adjacency(np.full((100, 100), 0.5), rng).edges().shape[0] for _ in range(10)]
        pairs = 100 * 99 / 2
        sigma = np.sqrt(pairs * 0.25 / 10)
        assert abs(np.mean(counts) - 0.5 * pairs) < 3 * sigma


class TestNetwork:
    def test_bit_identical_for_fixed_seed(self):
        a = generate_network(GeneratorConfig(60, 6, 2, 0.6, seed=3))
        b = generate_network(GeneratorConfig(60, 6, 2, 0.6, seed=3))
        np.testing.assert_array_equal(a.graph.adjacency, b.graph.adjacency)
        np.testing.assert_array_equal(a.P.entries, b.P.entries)
        np.testing.assert_array_equal(a.z.labels, b.z.labels)

    def test_block_average_matches_b(self):
        net = generate_network(GeneratorConfig(60, 6, 2, 0.6, seed=4))
        np.testing.assert_allclose(block_average(net.P, net.z), net.params.B, atol=1e-12)

    def test_not_presorted(self):
        net = generate_network(GeneratorConfig(60, 6, 2, 0.6, seed=5))
        assert np.any(np.diff(net.z.labels) < 0)

    def test_assumptions_hold(self):
        for seed in range(10):
            net = generate_network(GeneratorConfig(48, 4, 2, 0.6, seed=seed))
            assert np.linalg.svd(net.params.B, compute_uv=False).min() > 1e-8
            for k in range(4):
                idx = net.z.members(k)
                assert np.linalg.svd(net.params.H[idx], compute_uv=False).min() > 1e-8

    def test_table_regime_is_nbm(self):
        net = generate_network(GeneratorConfig(900, 6, 2, 0.6, seed=0))
        assert model_kind(net.params) is ModelKind.NBM
        assert net.graph.n == 900

    def test_balanced_sizes(self):
        net = generate_network(GeneratorConfig(60, 6, 3, 0.6, seed=6))
        assert net.z.sizes.tolist() == [10] * 6
        assert net.c.sizes.tolist() == [2] * 3

    def test_independent_streams(self):
        cfg = GeneratorConfig(40, 4, 2, 0.6, seed=9)
        u = derive_rng(cfg.seed, "edges").random()
        v = derive_rng(cfg.seed, "labels").random()
        assert u != v
