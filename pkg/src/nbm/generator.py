"""Synthetic balanced NBM networks.

Heterogeneity patterns, the assortativity-controlled block matrix and the
probability matrix are built in sorted (meta-community, community) order and
then scattered back to a random node order.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import (
    Clustering,
    NbmParameters,
    ProbabilityMatrix,
    SymmetricGraph,
    as_matrix,
    block_view,
    build_probability,
    derive_rng,
)

B_MAX = 1.0
MAX_ATTEMPTS = 100


class UnbalancedConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    K: int
    L: int
    omega: float
    seed: int = 0
    b_min: float = 0.35

    def __post_init__(self):
        n, K, L = self.n, self.K, self.L
        if min(n, K, L) < 1:
            raise UnbalancedConfigError("n, K and L must be positive")
        if L > K or K > n:
            raise UnbalancedConfigError("need 1 <= L <= K <= n")
        if K % L:
            raise UnbalancedConfigError(f"unbalanced: K={K} is not divisible by L={L}")
        if n % K:
            raise UnbalancedConfigError(f"unbalanced: n={n} is not divisible by K={K}")
        if L > 1 and n // K < max(L, 2):
            raise UnbalancedConfigError(
                f"community size {n // K} is too small for {L} distinct patterns"
            )
        if not 0 < self.omega < 1:
            raise UnbalancedConfigError("omega must lie in (0, 1)")
        if not 0 <= self.b_min <= B_MAX:
            raise UnbalancedConfigError("b_min must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GeneratedNetwork:
    graph: SymmetricGraph
    P: ProbabilityMatrix
    params: NbmParameters
    config: GeneratorConfig

    @property
    def z(self) -> Clustering:
        return self.params.z

    @property
    def c(self) -> Clustering:
        return self.params.c


def _sub_block_bounds(size: int, L: int) -> np.ndarray:
    return np.array_split(np.arange(size), L)


def generate_h_matrix(cfg: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
    """Scaled heterogeneity matrix ``H`` in sorted node order, shape (n, L).

    Column 0 sorts each community block of a uniform vector ascending and
    splits it into ``L`` sub-blocks. Column 1 reverses every sub-block and
    lists the sub-blocks in descending order, so the block is descending.
    Column ``s >= 2`` cyclically rotates the sub-blocks of column 1 by
    ``s - 1``. Each community sub-vector is rescaled to sum to the
    community size.
    """
    n, K, L = cfg.n, cfg.K, cfg.L
    m = n // K
    Y = rng.uniform(0.0, 1.0, size=n)
    H_bar = np.empty((n, L))
    parts = _sub_block_bounds(m, L)
    for k in range(K):
        block = np.sort(Y[k * m:(k + 1) * m])
        H_bar[k * m:(k + 1) * m, 0] = block
        descending = [block[idx][::-1] for idx in parts[::-1]]
        for s in range(1, L):
            shift = s - 1
            order = [descending[(i + shift) % L] for i in range(L)]
            H_bar[k * m:(k + 1) * m, s] = np.concatenate(order)
    sums = H_bar.reshape(K, m, L).sum(axis=1)
    scale = np.repeat(m / sums, m, axis=0)
    return H_bar * scale


def _block_maxima(H_sorted: np.ndarray, K: int, L: int) -> np.ndarray:
    """K x K matrix of ``max(max H~(k,l), max H~(l,k))`` for the replicated H."""
    m = H_sorted.shape[0] // K
    per_meta = K // L
    # maxima[k, l] = max of community k's sub-vector in the column replicated for community l
    maxima = H_sorted.reshape(K, m, L).max(axis=1)[:, np.arange(K) // per_meta]
    return np.maximum(maxima, maxima.T)


def generate_B(cfg: GeneratorConfig, h_max: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Block matrix in sorted community order.

    ``B~`` is symmetric with off-diagonal entries uniform on ``[b_min, 1]``
    and each diagonal entry uniform between its row maximum and one. The
    result is ``B~ / h_max**2`` with off-diagonal entries scaled by omega.
    """
    K = cfg.K
    B_tilde = np.zeros((K, K))
    iu = np.triu_indices(K, 1)
    B_tilde[iu] = rng.uniform(cfg.b_min, B_MAX, size=iu[0].size)
    B_tilde = B_tilde + B_tilde.T
    row_max = B_tilde.max(axis=1) if K > 1 else np.full(K, cfg.b_min)
    B_tilde[np.diag_indices(K)] = rng.uniform(row_max, B_MAX)
    B = B_tilde / h_max**2
    off = ~np.eye(K, dtype=bool)
    B[off] *= cfg.omega
    return B


def sample_adjacency(P, rng: np.random.Generator) -> SymmetricGraph:
    """Independent Bernoulli edges on the strict lower triangle, mirrored."""
    P = as_matrix(P)
    n = P.shape[0]
    il = np.tril_indices(n, -1)
    A = np.zeros((n, n))
    A[il] = rng.random(il[0].size) < P[il]
    return SymmetricGraph(A + A.T)


def _satisfies_assumptions(B: np.ndarray, H_sorted: np.ndarray, K: int, L: int, tol: float = 1e-8) -> bool:
    if np.linalg.svd(B, compute_uv=False).min() <= tol:
        return False
    m = H_sorted.shape[0] // K
    for k in range(K):
        if np.linalg.svd(H_sorted[k * m:(k + 1) * m], compute_uv=False).min() <= tol:
            return False
    return True


def generate_network(cfg: GeneratorConfig) -> GeneratedNetwork:
    """Draw a balanced NBM network with random community and node labelling."""
    n, K, L = cfg.n, cfg.K, cfg.L
    for attempt in range(MAX_ATTEMPTS):
        H_sorted = generate_h_matrix(cfg, derive_rng(cfg.seed, "heterogeneity", attempt))
        h_max = _block_maxima(H_sorted, K, L)
        B_sorted = generate_B(cfg, h_max, derive_rng(cfg.seed, "block-matrix", attempt))
        if _satisfies_assumptions(B_sorted, H_sorted, K, L):
            break
    else:
        raise RuntimeError("could not draw parameters satisfying the identifiability assumptions")

    rng = derive_rng(cfg.seed, "labels")
    per_meta, m = K // L, n // K
    c = Clustering(rng.permutation(np.repeat(np.arange(L), per_meta)), L)
    z = Clustering(rng.permutation(np.repeat(np.arange(K), m)), K)

    view = block_view(z, c)
    H = np.empty_like(H_sorted)
    H[view.perm] = H_sorted
    B = np.empty_like(B_sorted)
    order = view.community_order
    B[np.ix_(order, order)] = B_sorted

    params = NbmParameters(B, H, z, c)
    P = build_probability(params)
    graph = sample_adjacency(P, derive_rng(cfg.seed, "edges"))
    return GeneratedNetwork(graph, P, params, cfg)
