"""Brute-force references for small instances.

Nothing here is meant for production use; these are exhaustive or
closed-form solvers that the fast code paths are checked against.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import Clustering, as_matrix
from .estimator import objective
from .ssc import elastic_net_objective

MAX_NODES = 12
MAX_COMMUNITIES = 3


def surjections(m: int, k: int):
    """All label tuples of length ``m`` that use every value in ``range(k)``."""
    for labels in itertools.product(range(k), repeat=m):
        if len(set(labels)) == k:
            yield labels


def exhaustive_best_clustering(P, K: int, L: int, atol: float = 1e-9):
    """Minimum of the block-column objective over every ``(z, c)``.

    Returns ``(best, minimizers)`` where ``minimizers`` holds every
    ``(z, c)`` pair of label tuples whose objective is within ``atol`` of the
    best value.
    """
    P = as_matrix(P)
    n = P.shape[0]
    if n > MAX_NODES or K > MAX_COMMUNITIES or not 1 <= L <= K <= n:
        raise ValueError(
            f"exhaustive search needs n <= {MAX_NODES}, K <= {MAX_COMMUNITIES}, 1 <= L <= K <= n"
        )
    metas = [Clustering(np.array(c), L) for c in surjections(K, L)]
    values = []
    for z_labels in surjections(n, K):
        z = Clustering(np.array(z_labels), K)
        for c in metas:
            values.append((objective(P, z, c), z_labels, tuple(c.labels.tolist())))
    best = min(v[0] for v in values)
    minimizers = {(z, c) for v, z, c in values if v <= best + atol}
    return best, minimizers


def equivalent_labelings(z, c) -> set:
    """Every ``(pi . z, sigma . c . pi^-1)`` for community and meta relabellings."""
    z = np.asarray(z.labels if isinstance(z, Clustering) else z)
    c = np.asarray(c.labels if isinstance(c, Clustering) else c)
    K, L = int(z.max()) + 1, int(c.max()) + 1
    out = set()
    for pi in itertools.permutations(range(K)):
        pi = np.array(pi)
        inv = np.argsort(pi)
        for sigma in itertools.permutations(range(L)):
            sigma = np.array(sigma)
            out.add((tuple(pi[z].tolist()), tuple(sigma[c[inv]].tolist())))
    return out


def brute_force_clustering_error(z_true, z_hat, K=None) -> float:
    """Clustering error by trying every relabelling of ``z_hat``."""
    a = np.asarray(z_true.labels if isinstance(z_true, Clustering) else z_true)
    b = np.asarray(z_hat.labels if isinstance(z_hat, Clustering) else z_hat)
    size = max(int(K or 0), int(a.max()) + 1, int(b.max()) + 1)
    best = a.size
    for perm in itertools.permutations(range(size)):
        best = min(best, int(np.count_nonzero(np.asarray(perm)[b] != a)))
    return best / a.size


def reference_elastic_net(A, j, gamma1, gamma2, max_iter=10**6, tol=1e-14) -> np.ndarray:
    """Proximal gradient with a fixed ``1 / Lipschitz`` step and ``w_j`` pinned to zero."""
    A = as_matrix(A)
    n = A.shape[1]
    G = A.T @ A
    target = A.T @ A[:, j]
    lipschitz = np.linalg.eigvalsh(G).max() + 2.0 * gamma2
    step = 1.0 / lipschitz
    w = np.zeros(n)
    for _ in range(max_iter):
        grad = G @ w - target + 2.0 * gamma2 * w
        x = w - step * grad
        new = np.sign(x) * np.maximum(np.abs(x) - step * gamma1, 0.0)
        new[j] = 0.0
        if np.max(np.abs(new - w)) <= tol:
            return new
        w = new
    return w


def ridge_pinned(A, j, gamma2) -> np.ndarray:
    """Closed-form minimizer of ``0.5||A_j - A w||^2 + gamma2 ||w||^2`` with ``w_j = 0``."""
    A = as_matrix(A)
    n = A.shape[1]
    keep = np.flatnonzero(np.arange(n) != j)
    X = A[:, keep]
    w = np.zeros(n)
    w[keep] = np.linalg.solve(X.T @ X + 2.0 * gamma2 * np.eye(keep.size), X.T @ A[:, j])
    return w


def reference_objective(A, j, gamma1, gamma2) -> float:
    return elastic_net_objective(A, j, reference_elastic_net(A, j, gamma1, gamma2), gamma1, gamma2)


def set_partitions(m: int, k: int):
    """Restricted-growth label tuples: every partition of ``m`` items into ``k`` blocks once."""
    def grow(prefix, used):
        if len(prefix) == m:
            if used == k:
                yield tuple(prefix)
            return
        remaining = m - len(prefix)
        if k - used > remaining:
            return
        for label in range(min(used + 1, k)):
            yield from grow(prefix + [label], max(used, label + 1))

    yield from grow([], 0)


def k_median_cost(X, labels) -> float:
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    total = 0.0
    for j in np.unique(labels):
        members = X[labels == j]
        total += np.abs(members - np.median(members, axis=0)).sum()
    return float(total)


def exhaustive_k_median(X, k: int):
    """Optimal L1 partition cost and a minimizing labelling, by enumeration.

    A partition's cost is the sum of its blocks' costs, so each block is
    costed once per distinct member set.
    """
    X = np.asarray(X, dtype=np.float64)
    weights = 1 << np.arange(X.shape[0])
    cache = {}

    def block_cost(mask):
        if mask not in cache:
            members = X[(mask & weights) > 0]
            cache[mask] = float(np.abs(members - np.median(members, axis=0)).sum())
        return cache[mask]

    best, best_labels = np.inf, None
    for labels in set_partitions(X.shape[0], k):
        masks = np.bincount(labels, weights=weights, minlength=k).astype(np.int64)
        cost = sum(block_cost(int(m)) for m in masks)
        if cost < best:
            best, best_labels = cost, labels
    return best, np.array(best_labels)
