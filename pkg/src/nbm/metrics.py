"""Clustering error up to label permutation and AIC-penalized estimation error."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Clustering, ModelKind, as_matrix


def _labels(z) -> np.ndarray:
    if isinstance(z, Clustering):
        return z.labels
    return np.asarray(z, dtype=np.int64)


def confusion_matrix(z_true, z_hat, K=None) -> np.ndarray:
    """Square count matrix ``M[a, b] = #{i : z_true(i) = a, z_hat(i) = b}``.

    The side is ``max(K, K_true, K_hat)``; missing labels give zero rows or columns.
    """
    a, b = _labels(z_true), _labels(z_hat)
    if a.shape != b.shape:
        raise ValueError(f"label vectors differ in length: {a.size} vs {b.size}")
    if a.size and (a.min() < 0 or b.min() < 0):
        raise ValueError("labels must be nonnegative")
    size = max(int(K or 0), int(a.max(initial=-1)) + 1, int(b.max(initial=-1)) + 1)
    if K is not None and size > K:
        raise ValueError(f"labels exceed the stated number of clusters K={K}")
    M = np.zeros((size, size), dtype=np.int64)
    np.add.at(M, (a, b), 1)
    return M


def clustering_error(z_true, z_hat, K=None) -> float:
    """Smallest fraction of nodes whose labels disagree over all relabellings.

    Solved exactly as a maximum-trace assignment on the confusion matrix.
    """
    M = confusion_matrix(z_true, z_hat, K)
    n = M.sum()
    if n == 0:
        return 0.0
    rows, cols = linear_sum_assignment(M, maximize=True)
    return float(1.0 - M[rows, cols].sum() / n)


def n_parameters(model, n: int, K: int, L: int = 1) -> int:
    """Parameter counts used in the AIC-type penalty."""
    model = ModelKind(model)
    if model in (ModelKind.DCBM, ModelKind.SBM):
        return n + K * (K + 1) // 2 - 1
    if model is ModelKind.NBM:
        return n * L + K * (K + 1) // 2 - K * L
    if model is ModelKind.PABM:
        return n * K
    raise ValueError(f"unknown model {model!r}")


def model_for(K: int, L: int) -> ModelKind:
    """Name of the block model a fit with ``(K, L)`` corresponds to."""
    if L == 1:
        return ModelKind.DCBM
    if L == K:
        return ModelKind.PABM
    return ModelKind.NBM


def estimation_error(P_hat, P_true, model, n=None, K=None, L=1) -> float:
    """``n^-2 (||P_hat - P||_F^2 + 2 mean(P) N_par)``."""
    P_hat, P_true = as_matrix(P_hat), as_matrix(P_true)
    if P_hat.shape != P_true.shape:
        raise ValueError(f"shape mismatch {P_hat.shape} vs {P_true.shape}")
    n = P_true.shape[0] if n is None else n
    if K is None:
        raise ValueError("K is required")
    try:
        model = ModelKind(model)
    except ValueError:
        raise ValueError(f"unknown model tag {model!r}") from None
    sq = float(np.sum((P_hat - P_true) ** 2))
    p_bar = float(P_true.mean())
    return (sq + 2.0 * p_bar * n_parameters(model, n, K, L)) / n**2
