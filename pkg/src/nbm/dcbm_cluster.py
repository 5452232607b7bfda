"""Spectral clustering with k-median for degree-corrected blocks.

The adjacency (sub)matrix is replaced by its best rank-k approximation,
every column is scaled to unit L1 norm, and the columns are grouped by an
L1 Lloyd iteration (coordinate-wise medians).
"""

from __future__ import annotations

import numpy as np

from .core import Clustering, as_matrix
from .lloyd import LloydResult, lloyd

KMEDIAN_RESTARTS = 10


def leading_eigenpairs(M: np.ndarray, k: int):
    """``k`` eigenpairs with the largest ``|lambda|``.

    Ties are ordered by ``(|lambda| desc, lambda desc, index asc)``; each
    eigenvector is signed so its first nonzero entry is positive.
    """
    vals, vecs = np.linalg.eigh(M)
    idx = np.arange(vals.size)
    order = np.lexsort((idx, -vals, -np.abs(vals)))[:k]
    vals, vecs = vals[order], vecs[:, order]
    for j in range(vecs.shape[1]):
        nz = np.flatnonzero(np.abs(vecs[:, j]) > 1e-12)
        if nz.size and vecs[nz[0], j] < 0:
            vecs[:, j] = -vecs[:, j]
    return vals, vecs


def rank_k_approx(M, k: int) -> np.ndarray:
    """Frobenius-optimal symmetric rank-``k`` approximation ``U D U^T``."""
    M = as_matrix(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not 1 <= k <= M.shape[0]:
        raise ValueError(f"k={k} must lie in [1, {M.shape[0]}]")
    vals, U = leading_eigenpairs(M, k)
    return (U * vals) @ U.T


def l1_normalize_columns(M) -> np.ndarray:
    """Divide each column by its L1 norm; all-zero columns are left at zero."""
    M = np.asarray(M, dtype=np.float64)
    norms = np.abs(M).sum(axis=0)
    return np.divide(M, norms, out=np.zeros_like(M), where=norms > 0)


def k_median(points, k: int, rng: np.random.Generator, n_init: int = KMEDIAN_RESTARTS) -> LloydResult:
    """L1 Lloyd clustering of the rows of ``points``; best of ``n_init`` seeded runs."""
    return lloyd(points, k, rng, metric="cityblock", n_init=n_init)


def cluster_communities(A_sub, k: int, rng: np.random.Generator) -> Clustering:
    """Split one (meta-)community into ``k`` communities."""
    A_sub = as_matrix(A_sub)
    n = A_sub.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    if k == 1:
        return Clustering(np.zeros(n, dtype=np.int64), 1)
    P_tilde = l1_normalize_columns(rank_k_approx(A_sub, k))
    # columns are the points being clustered
    return Clustering(k_median(P_tilde.T, k, rng).labels, k)
