import numpy as np
import pytest

from nbm.core import Clustering, NbmParameters
from nbm.generator import GeneratorConfig, generate_network

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_network():
    return generate_network(GeneratorConfig(40, 4, 2, 0.6, seed=7))


@pytest.fixture(scope="session")
def medium_network():
    return generate_network(GeneratorConfig(120, 4, 2, 0.6, seed=11))


def random_clustering(rng, n, k):
    """Surjective random labels: a shuffled cover of every cluster plus uniform fill."""
    labels = np.concatenate([np.arange(k), rng.integers(0, k, n - k)])
    return Clustering(rng.permutation(labels), k)


def random_parameters(rng, n, K, L, scale=0.9):
    """Valid NbmParameters with random community sizes; P entries stay below one."""
    z = random_clustering(rng, n, K)
    c = random_clustering(rng, K, L)
    H = rng.uniform(0.2, 1.0, size=(n, L))
    for k in range(K):
        idx = z.members(k)
        H[idx] *= idx.size / H[idx].sum(axis=0)
    B = rng.uniform(0.1, 1.0, size=(K, K))
    B = (B + B.T) / 2
    hmax = H.max()
    B *= scale / (B.max() * hmax**2)
    return NbmParameters(B, H, z, c)
