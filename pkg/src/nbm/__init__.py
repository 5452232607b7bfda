"""Nested block models for networks: simulation plus two-step clustering and estimation."""

from .core import (
    BlockPartitionView,
    Clustering,
    MetaClustering,
    ModelKind,
    NbmError,
    NbmParameters,
    NodeClustering,
    ProbabilityMatrix,
    ProbabilityRangeError,
    SymmetricGraph,
    block_average,
    build_probability,
    model_kind,
    permute_to_blocks,
)
from .dcbm_cluster import cluster_communities, k_median, l1_normalize_columns, rank_k_approx
from .estimator import (
    FitResult,
    InfeasibleAllocationError,
    estimate_theta,
    fit,
    objective,
    penalty_bar,
    penalty_klopp,
    rank_one_project,
)
from .generator import GeneratorConfig, UnbalancedConfigError, generate_network
from .metrics import clustering_error, estimation_error, n_parameters
from .selection import select_k_dcbm, select_model
from .ssc import (
    ConvergenceError,
    DegenerateAffinityError,
    build_affinity,
    default_gammas,
    solve_elastic_net_column,
    spectral_ncut,
    ssc_cluster,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
