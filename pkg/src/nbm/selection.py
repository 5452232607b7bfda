"""Choosing the number of communities and meta-communities.

For each small ``L`` the meta-communities are found by SSC, the number of
communities inside each of them by an eigen-gap rule, and the candidates are
compared by a penalized squared residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix
from .estimator import FitResult, fit, penalty_bar
from .metrics import model_for, n_parameters
from .ssc import DEFAULT_TOL, ssc_cluster

CRITERIA = ("aic", "bic", "penalty")


def select_k_dcbm(A_sub, k_max: int) -> int:
    """Number of communities by the largest relative eigen-gap.

    With ``|lambda_1| >= |lambda_2| >= ...`` this returns the first
    ``k <= k_max`` maximizing ``(|lambda_k| - |lambda_{k+1}|) / |lambda_k|``.
    """
    A_sub = as_matrix(A_sub)
    n = A_sub.shape[0]
    if k_max < 1:
        raise ValueError("k_max must be at least one")
    if k_max == 1 or n <= 1:
        return 1
    mags = np.sort(np.abs(np.linalg.eigvalsh(A_sub)))[::-1]
    top = min(k_max, n - 1)
    head, tail = mags[:top], mags[1:top + 1]
    gaps = np.divide(head - tail, head, out=np.zeros(top), where=head > 0)
    return int(np.argmax(gaps)) + 1


def criterion_term(criterion: str, n: int, K: int, L: int, density: float) -> float:
    n_par = n_parameters(model_for(K, L), n, K, L)
    if criterion == "aic":
        return 2.0 * density * n_par
    if criterion == "bic":
        return density * n_par * np.log(n * (n - 1) / 2)
    if criterion == "penalty":
        return penalty_bar(n, K, L)
    raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")


@dataclass
class SelectionResult:
    best: FitResult
    trace: list = field(default_factory=list)

    def report(self) -> list:
        return [{k: v for k, v in row.items() if k != "fit"} for row in self.trace]


def select_model(
    A,
    l_max: int = 3,
    k_max: int = 6,
    criterion: str = "aic",
    *,
    seed: int = 0,
    gammas=None,
    k_selector=select_k_dcbm,
    tol: float = DEFAULT_TOL,
) -> SelectionResult:
    """Fit ``L = 1..l_max`` and keep the candidate with the smallest criterion.

    The criterion is ``||A - P_hat||_F^2`` plus a complexity term; the AIC and
    BIC terms use the observed edge density in place of the mean probability.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    A = as_matrix(A).copy()
    np.fill_diagonal(A, 0.0)
    n = A.shape[0]
    rho = float(A.mean())
    representation = None
    trace = []
    for L in range(1, min(l_max, n) + 1):
        meta, representation = ssc_cluster(A, L, gammas=gammas, seed=seed,
                                           representation=representation, tol=tol)
        allocation = []
        for l in range(L):
            idx = meta.members(l)
            allocation.append(k_selector(A[np.ix_(idx, idx)], min(k_max, idx.size)))
        K = sum(allocation)
        result = fit(A, K, L, allocation=allocation, gammas=gammas, seed=seed,
                     representation=representation, tol=tol)
        residual = float(np.sum((A - result.P_hat) ** 2))
        term = criterion_term(criterion, n, K, L, rho)
        trace.append({
            "L": L,
            "K": K,
            "allocation": allocation,
            "model": model_for(K, L).value,
            "objective": result.objective,
            "residual": residual,
            "penalty": term,
            "criterion": residual + term,
            "chosen": False,
            "fit": result,
        })
    best = min(range(len(trace)), key=lambda i: trace[i]["criterion"])
    trace[best]["chosen"] = True
    return SelectionResult(trace[best]["fit"], trace)
