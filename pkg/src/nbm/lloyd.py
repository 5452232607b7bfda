"""Lloyd-type partitioning with L2 (k-means) or L1 (k-median) geometry."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

_METRICS = {
    # name: (cdist metric, centroid update); seeding samples proportional to the distance
    "sqeuclidean": ("sqeuclidean", np.mean),
    "cityblock": ("cityblock", np.median),
}


@dataclass
class LloydResult:
    labels: np.ndarray
    centers: np.ndarray
    cost: float
    cost_history: list
    n_iter: int
    restart: int


def _distances(X, centers, metric):
    return cdist(X, centers, metric=_METRICS[metric][0])


def plus_plus_init(X: np.ndarray, k: int, rng: np.random.Generator, metric: str) -> np.ndarray:
    """k-means++ seeding; the sampling weight is the point-to-nearest-center distance."""
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    nearest = _distances(X, X[chosen], metric)[:, 0]
    for _ in range(1, k):
        total = nearest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=nearest / total))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(remaining))
        chosen.append(idx)
        nearest = np.minimum(nearest, _distances(X, X[[idx]], metric)[:, 0])
    return X[chosen].copy()


def _update_centers(X, labels, centers, metric):
    reduce = _METRICS[metric][1]
    new = centers.copy()
    for j in range(centers.shape[0]):
        members = X[labels == j]
        if members.shape[0]:
            new[j] = reduce(members, axis=0)
    return new


def _repair_empty(X, labels, D):
    """Move each empty cluster onto the point farthest from its own center."""
    k = D.shape[1]
    counts = np.bincount(labels, minlength=k)
    own = D[np.arange(X.shape[0]), labels]
    for j in np.flatnonzero(counts == 0):
        donors = counts[labels] > 1
        if not donors.any():
            break
        far = int(np.argmax(np.where(donors, own, -np.inf)))
        counts[labels[far]] -= 1
        labels[far] = j
        counts[j] += 1
        own[far] = -np.inf
    return labels


def lloyd_single(X, centers, metric, max_iter=300):
    history = []
    labels = None
    for it in range(1, max_iter + 1):
        D = _distances(X, centers, metric)
        new_labels = np.argmin(D, axis=1)
        new_labels = _repair_empty(X, new_labels, D)
        centers = _update_centers(X, new_labels, centers, metric)
        cost = float(_distances(X, centers, metric)[np.arange(X.shape[0]), new_labels].sum())
        history.append(cost)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return new_labels, centers, history, it


def lloyd(
    X: np.ndarray,
    k: int,
    rng: np.random.Generator,
    metric: str = "sqeuclidean",
    n_init: int = 10,
    max_iter: int = 300,
) -> LloydResult:
    """Best of ``n_init`` seeded Lloyd runs; ties go to the earliest restart."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be two-dimensional")
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    if metric not in _METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    best = None
    for r in range(n_init):
        init = plus_plus_init(X, k, rng, metric)
        labels, centers, history, n_iter = lloyd_single(X, init, metric, max_iter)
        cost = history[-1]
        if best is None or cost < best.cost:
            best = LloydResult(labels, centers, cost, history, n_iter, r)
    return best
