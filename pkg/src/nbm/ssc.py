"""Sparse subspace clustering of nodes into meta-communities.

Each column of the adjacency matrix is written as an elastic-net combination
of the other columns; the absolute weights are symmetrized into an affinity
and partitioned by a normalized cut.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import Clustering, NbmError, as_matrix, derive_rng
from .lloyd import lloyd

DEFAULT_TOL = 1e-7
NCUT_RESTARTS = 20


class ConvergenceError(NbmError, RuntimeError):
    def __init__(self, message, residual, columns=None):
        super().__init__(message)
        self.residual = residual
        self.columns = columns


class DegenerateAffinityError(NbmError, ValueError):
    pass


@dataclass
class SelfRepresentation:
    """Weights ``W`` (zero diagonal) and per-column solver diagnostics."""

    W: np.ndarray
    gamma1: float
    gamma2: float
    iterations: np.ndarray
    residuals: np.ndarray

    def report(self) -> dict:
        return {
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "max_iterations": int(self.iterations.max(initial=0)),
            "max_residual": float(self.residuals.max(initial=0.0)),
            "iterations": self.iterations.tolist(),
            "residuals": self.residuals.tolist(),
        }


def density(A) -> float:
    A = as_matrix(A)
    return float(np.count_nonzero(A)) / A.size


def default_gammas(A) -> tuple[float, float]:
    """``(30 rho, 125 (1 - rho))`` with ``rho`` the fraction of nonzero entries."""
    rho = density(A)
    return 30.0 * rho, 125.0 * (1.0 - rho)


def _soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def kkt_residual(G, targets, W, cols, gamma1, gamma2):
    """Largest stationarity violation per column, diagonal coordinate excluded.

    ``G = A.T @ A`` and ``targets = A.T @ A[:, cols]``.
    """
    grad = G @ W - targets
    active = W != 0
    viol = np.where(
        active,
        np.abs(grad + gamma1 * np.sign(W) + 2.0 * gamma2 * W),
        np.maximum(np.abs(grad) - gamma1, 0.0),
    )
    viol[cols, np.arange(len(cols))] = 0.0
    return viol.max(axis=0) if viol.size else np.zeros(len(cols))


def elastic_net_objective(A, j, w, gamma1, gamma2) -> float:
    A = as_matrix(A)
    r = A[:, j] - A @ w
    return 0.5 * r @ r + gamma1 * np.abs(w).sum() + gamma2 * w @ w


def solve_elastic_net(A, gamma1, gamma2, columns=None, tol=DEFAULT_TOL, max_iter=None, raise_on_failure=True):
    """Cyclic coordinate descent for every requested column at once.

    Column ``j`` minimizes ``0.5||A_j - A w||^2 + gamma1 ||w||_1 + gamma2 ||w||^2``
    with ``w_j = 0``. Columns are processed as a batch but every update is
    elementwise per column, so each column's iterates do not depend on which
    other columns share the batch. Converged columns leave the batch.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if gamma1 < 0:
        raise ValueError("gamma1 must be nonnegative")
    if gamma2 <= 0:
        raise ValueError("gamma2 must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    cols = np.arange(n) if columns is None else np.atleast_1d(np.asarray(columns, dtype=np.int64))
    if max_iter is None:
        max_iter = 10 * n

    G = A.T @ A
    diag = np.diag(G).copy()
    denom = diag + 2.0 * gamma2

    W_out = np.zeros((n, cols.size))
    iterations = np.zeros(cols.size, dtype=np.int64)
    residuals = np.zeros(cols.size)

    live = np.arange(cols.size)
    W = np.zeros((n, cols.size))
    T = G[:, cols].copy()
    Q = np.zeros_like(W)  # Q = G @ W, kept current by rank-one updates
    own = cols.copy()

    res = kkt_residual(G, T, W, own, gamma1, gamma2)
    done = res <= tol
    sweep = 0
    while True:
        if done.any():
            W_out[:, live[done]] = W[:, done]
            residuals[live[done]] = res[done]
            iterations[live[done]] = sweep
            keep = ~done
            live, W, T, Q, own = live[keep], W[:, keep], T[:, keep], Q[:, keep], own[keep]
        if live.size == 0 or sweep >= max_iter:
            break
        sweep += 1
        for i in range(n):
            old = W[i]
            rho = T[i] - Q[i] + diag[i] * old
            new = _soft_threshold(rho, gamma1) / denom[i]
            new[own == i] = 0.0
            delta = new - old
            if np.any(delta):
                Q += np.outer(G[:, i], delta)
                W[i] = new
        res = kkt_residual(G, T, W, own, gamma1, gamma2)
        done = res <= tol

    if live.size:
        W_out[:, live] = W
        residuals[live] = res
        iterations[live] = sweep
        if raise_on_failure:
            raise ConvergenceError(
                f"{live.size} column(s) did not reach KKT residual {tol:g} in {max_iter} sweeps "
                f"(worst {res.max():.3g})",
                residual=float(res.max()),
                columns=cols[live].tolist(),
            )
    return W_out, iterations, residuals


def solve_elastic_net_column(A, j, gamma1, gamma2, tol=DEFAULT_TOL, max_iter=None) -> np.ndarray:
    W, _, _ = solve_elastic_net(A, gamma1, gamma2, columns=[j], tol=tol, max_iter=max_iter)
    return W[:, 0]


def self_representation(A, gammas=None, tol=DEFAULT_TOL, max_iter=None,
                        zero_diagonal=True) -> SelfRepresentation:
    """Elastic-net weights for every column of ``A``.

    The diagonal of ``A`` is unobserved for a graph and is zeroed first;
    pass ``zero_diagonal=False`` when ``A`` is a known probability matrix.
    """
    A = np.array(as_matrix(A))
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    gamma1, gamma2 = default_gammas(A) if gammas is None else gammas
    W, iterations, residuals = solve_elastic_net(A, gamma1, gamma2, tol=tol, max_iter=max_iter)
    return SelfRepresentation(W, float(gamma1), float(gamma2), iterations, residuals)


def build_affinity(W) -> np.ndarray:
    W = np.abs(np.asarray(W, dtype=np.float64))
    S = W + W.T
    np.fill_diagonal(S, 0.0)
    return S


def spectral_embedding(affinity, L) -> np.ndarray:
    """Rows of the L leading eigenvectors of ``D^-1/2 S D^-1/2``, L2-normalized."""
    S = np.asarray(affinity, dtype=np.float64)
    deg = S.sum(axis=1)
    inv_sqrt = np.zeros_like(deg)
    pos = deg > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    M = inv_sqrt[:, None] * S * inv_sqrt[None, :]
    _, vecs = np.linalg.eigh(M)
    U = vecs[:, ::-1][:, :L]
    norms = np.linalg.norm(U, axis=1)
    U = np.divide(U, norms[:, None], out=np.zeros_like(U), where=norms[:, None] > 0)
    return U


def spectral_ncut(affinity, L, rng=None, n_init=NCUT_RESTARTS) -> np.ndarray:
    """Normalized-cut partition of the affinity graph into ``L`` node groups."""
    S = np.asarray(affinity, dtype=np.float64)
    n = S.shape[0]
    if S.shape != (n, n):
        raise ValueError("affinity must be square")
    if S.min(initial=0.0) < 0 or not np.allclose(S, S.T):
        raise ValueError("affinity must be symmetric and nonnegative")
    if not 1 <= L <= n:
        raise ValueError(f"L={L} must lie in [1, {n}]")
    if L == 1:
        return np.zeros(n, dtype=np.int64)
    n_comp, _ = connected_components(S > 0, directed=False)
    if n_comp > n - L:
        raise DegenerateAffinityError(
            f"affinity graph has {n_comp} components, cannot resolve {L} clusters on {n} nodes"
        )
    if rng is None:
        rng = np.random.default_rng(0)
    U = spectral_embedding(S, L)
    return lloyd(U, L, rng, metric="sqeuclidean", n_init=n_init).labels


def ssc_cluster(A, L, gammas=None, seed=0, representation=None, tol=DEFAULT_TOL,
                zero_diagonal=True):
    """Node-level meta-community labels and the self-representation used.

    Pass a precomputed ``representation`` to reuse the elastic-net weights
    across several values of ``L``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if L == 1:
        return Clustering(np.zeros(n, dtype=np.int64), 1), representation
    if representation is None:
        representation = self_representation(A, gammas, tol=tol, zero_diagonal=zero_diagonal)
    labels = spectral_ncut(build_affinity(representation.W), L, derive_rng(seed, "ncut"))
    return Clustering(labels, L), representation
