"""Rank-one block-column estimation and the two-step NBM fit."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    BlockPartitionView,
    Clustering,
    NbmError,
    as_matrix,
    derive_rng,
    permute_to_blocks,
    unpermute,
)
from .dcbm_cluster import cluster_communities
from .ssc import DEFAULT_TOL, SelfRepresentation, ssc_cluster


class InfeasibleAllocationError(NbmError, ValueError):
    pass


def rank_one_project(M) -> np.ndarray:
    """Best Frobenius rank-one approximation ``s1 u1 v1^T``."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0 or not np.any(M):
        return np.zeros_like(M)
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    return s[0] * np.outer(U[:, 0], Vt[0])


def project_uv(M, u, v) -> np.ndarray:
    """``(u u^T) M (v v^T)`` for unit vectors ``u`` and ``v``."""
    u, v = np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64)
    return np.outer(u, u) @ np.asarray(M, dtype=np.float64) @ np.outer(v, v)


def _grid(view: BlockPartitionView, L: int, K: int):
    for l in range(L):
        for k in range(K):
            yield l, k, view.meta_slices[l], view.community_slices[k]


def objective(A, z: Clustering, c: Clustering) -> float:
    """Sum over the L x K block-columns of the squared rank-one residual."""
    sorted_A, view = permute_to_blocks(A, z, c)
    total = 0.0
    for _, _, rows, cols in _grid(view, c.n_clusters, z.n_clusters):
        M = sorted_A[rows, cols]
        total += float(np.sum((M - rank_one_project(M)) ** 2))
    return total


@dataclass
class ThetaEstimate:
    theta: np.ndarray  # sorted order, before symmetrization
    view: BlockPartitionView
    P_hat: np.ndarray  # original order, symmetrized
    singular_values: dict = field(default_factory=dict)  # (l, k) -> leading singular value


def estimate_theta(A, z: Clustering, c: Clustering) -> ThetaEstimate:
    """Replace each block-column by its rank-one projection and restore node order."""
    sorted_A, view = permute_to_blocks(A, z, c)
    theta = np.zeros_like(sorted_A)
    svals = {}
    for l, k, rows, cols in _grid(view, c.n_clusters, z.n_clusters):
        M = sorted_A[rows, cols]
        if M.size == 0:
            continue
        block = rank_one_project(M)
        theta[rows, cols] = block
        svals[(l, k)] = float(np.linalg.norm(block))
    P = unpermute(theta, view)
    return ThetaEstimate(theta, view, 0.5 * (P + P.T), svals)


def penalty_bar(n, K, L, psi1=1.0, psi2=1.0, psi3=1.0) -> float:
    """``psi1 n K + psi2 K^2 ln n + psi3 n ln K``; no ``L`` term appears."""
    _check_sizes(n, K, L)
    return psi1 * n * K + psi2 * K**2 * np.log(n) + psi3 * n * np.log(K)


def penalty_klopp(n, K, L, c1=1.0, c2=1.0) -> float:
    """``c1 (n L + K^2) ln n + c2 n ln K``."""
    _check_sizes(n, K, L)
    return c1 * (n * L + K**2) * np.log(n) + c2 * n * np.log(K)


def _check_sizes(n, K, L):
    if min(n, K, L) < 1:
        raise ValueError("n, K and L must be at least one")


def balanced_allocation(K: int, L: int, meta_sizes=None) -> list[int]:
    """``K // L`` communities per meta-community; any remainder goes to the largest ones."""
    alloc = [K // L] * L
    extra = K - sum(alloc)
    if extra:
        sizes = np.zeros(L) if meta_sizes is None else np.asarray(meta_sizes)
        for l in np.argsort(-sizes, kind="stable")[:extra]:
            alloc[l] += 1
    return alloc


@dataclass
class FitResult:
    z: Clustering
    c: Clustering
    meta: Clustering  # node-level meta-community labels, c(z(i))
    theta: np.ndarray
    view: BlockPartitionView
    P_hat: np.ndarray
    objective: float
    penalty: float
    singular_values: dict
    representation: SelfRepresentation | None = None

    @property
    def K(self) -> int:
        return self.z.n_clusters

    @property
    def L(self) -> int:
        return self.c.n_clusters

    def clamped(self) -> np.ndarray:
        return np.clip(self.P_hat, 0.0, 1.0)


def compose_clusterings(meta: Clustering, parts: list[Clustering]) -> tuple[Clustering, Clustering]:
    """Merge per-meta community labels into global ``(z, c)``."""
    z = np.empty(len(meta), dtype=np.int64)
    c = []
    offset = 0
    for l, part in enumerate(parts):
        z[meta.labels == l] = offset + part.labels
        c.extend([l] * part.n_clusters)
        offset += part.n_clusters
    return Clustering(z, offset), Clustering(np.array(c, dtype=np.int64), meta.n_clusters)


def fit(
    A,
    K: int,
    L: int,
    *,
    allocation=None,
    gammas=None,
    seed: int = 0,
    representation: SelfRepresentation | None = None,
    psi=(1.0, 1.0, 1.0),
    tol: float = DEFAULT_TOL,
    zero_diagonal: bool = True,
) -> FitResult:
    """Two-step clustering followed by block-column rank-one estimation.

    Meta-communities come from sparse subspace clustering (skipped when
    ``L == 1``); communities inside meta-community ``l`` come from spectral
    k-median with ``allocation[l]`` clusters (skipped when ``L == K``).

    The diagonal of ``A`` is treated as unobserved and set to zero unless
    ``zero_diagonal`` is false, which is meant for noiseless probability input.
    """
    A = as_matrix(A).copy()
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    n = A.shape[0]
    if not 1 <= L <= K <= n:
        raise ValueError(f"need 1 <= L <= K <= n, got L={L}, K={K}, n={n}")

    meta, representation = ssc_cluster(A, L, gammas=gammas, seed=seed,
                                       representation=representation, tol=tol,
                                       zero_diagonal=zero_diagonal)
    if L == K:
        z, c = meta, Clustering(np.arange(K), K)
    else:
        if allocation is None:
            allocation = balanced_allocation(K, L, meta.sizes)
        allocation = [int(a) for a in allocation]
        if len(allocation) != L or sum(allocation) != K or min(allocation) < 1:
            raise InfeasibleAllocationError(
                f"allocation {allocation} must have {L} positive entries summing to {K}"
            )
        parts = []
        for l in range(L):
            idx = meta.members(l)
            if idx.size < allocation[l]:
                raise InfeasibleAllocationError(
                    f"meta-community {l} has {idx.size} nodes but needs {allocation[l]} communities"
                )
            sub = A[np.ix_(idx, idx)]
            parts.append(cluster_communities(sub, allocation[l], derive_rng(seed, "kmedian", l)))
        z, c = compose_clusterings(meta, parts)

    est = estimate_theta(A, z, c)
    perm = est.view.perm
    obj = float(np.sum((A[np.ix_(perm, perm)] - est.theta) ** 2))
    return FitResult(
        z=z,
        c=c,
        meta=meta,
        theta=est.theta,
        view=est.view,
        P_hat=est.P_hat,
        objective=obj,
        penalty=penalty_bar(n, K, L, *psi),
        singular_values=est.singular_values,
        representation=representation,
    )
