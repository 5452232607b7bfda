"""Model algebra for the Nested Block Model.

Labels are 0-based integer arrays internally. A node clustering maps ``n``
nodes onto ``K`` communities, a meta clustering maps ``K`` communities onto
``L`` meta-communities. Both are :class:`Clustering` instances.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class NbmError(Exception):
    """Base class for errors raised by this package."""


class ProbabilityRangeError(NbmError, ValueError):
    """A computed connection probability fell outside [0, 1]."""


def derive_rng(seed: int, *tags) -> np.random.Generator:
    """Independent generator keyed by ``(seed, *tags)``.

    String tags are hashed with CRC32 so streams are stable across runs and
    interpreter sessions.
    """
    key = [int(seed)]
    for tag in tags:
        if isinstance(tag, str):
            key.append(zlib.crc32(tag.encode("utf-8")))
        else:
            key.append(int(tag))
    return np.random.default_rng(np.random.SeedSequence(key))


@dataclass(frozen=True)
class Clustering:
    """Surjective map from ``len(labels)`` items onto ``{0, ..., n_clusters-1}``."""

    labels: np.ndarray
    n_clusters: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if labels.size and not np.issubdtype(labels.dtype, np.integer):
            if not np.all(labels == np.round(labels)):
                raise ValueError("labels must be integers")
        labels = labels.astype(np.int64)
        k = int(self.n_clusters)
        if k < 1:
            raise ValueError("n_clusters must be positive")
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise ValueError(f"labels must lie in [0, {k - 1}]")
        sizes = np.bincount(labels, minlength=k)
        if np.any(sizes == 0):
            empty = np.flatnonzero(sizes == 0).tolist()
            raise ValueError(f"empty clusters are not allowed: {empty}")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "n_clusters", k)

    @classmethod
    def from_labels(cls, labels) -> "Clustering":
        """Build from arbitrary hashable labels, relabelled by first appearance."""
        _, first, inverse = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        relabelled = order[inverse.ravel()]
        return cls(relabelled, len(first))

    def __len__(self):
        return self.labels.size

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_clusters)

    def matrix(self) -> np.ndarray:
        """0/1 membership matrix ``Z`` with ``Z.T @ Z == diag(sizes)``."""
        Z = np.zeros((self.labels.size, self.n_clusters))
        Z[np.arange(self.labels.size), self.labels] = 1.0
        return Z

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.labels == k)


NodeClustering = Clustering
MetaClustering = Clustering


def node_meta_labels(z: Clustering, c: Clustering) -> np.ndarray:
    """Meta-community of every node, ``c(z(i))``."""
    _check_nested(z, c)
    return c.labels[z.labels]


def _check_nested(z: Clustering, c: Clustering) -> None:
    if len(c) != z.n_clusters:
        raise ValueError(
            f"meta clustering covers {len(c)} communities, node clustering has {z.n_clusters}"
        )


@dataclass(frozen=True)
class SymmetricGraph:
    """Undirected simple graph stored as a dense 0/1 adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.adjacency)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.all((A == 0) | (A == 1)):
            raise ValueError("adjacency must be binary")
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ValueError("adjacency must have a zero diagonal")
        A = A.astype(np.float64)
        A.setflags(write=False)
        object.__setattr__(self, "adjacency", A)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of ``i < j`` pairs in lexicographic order."""
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return np.column_stack([i, j])

    @classmethod
    def from_edges(cls, n: int, edges) -> "SymmetricGraph":
        A = np.zeros((n, n))
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
            A[edges[:, 0], edges[:, 1]] = 1.0
            A[edges[:, 1], edges[:, 0]] = 1.0
        return cls(A)


def as_matrix(M) -> np.ndarray:
    """Unwrap a graph or probability matrix into a float array."""
    if isinstance(M, SymmetricGraph):
        return M.adjacency
    if isinstance(M, ProbabilityMatrix):
        return M.entries
    return np.asarray(M, dtype=np.float64)


@dataclass(frozen=True)
class ProbabilityMatrix:
    entries: np.ndarray
    atol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        P = np.asarray(self.entries, dtype=np.float64)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("probability matrix must be square")
        if not np.allclose(P, P.T, rtol=0, atol=self.atol):
            raise ValueError("probability matrix must be symmetric")
        if P.size and (P.min() < -self.atol or P.max() > 1 + self.atol):
            raise ProbabilityRangeError(
                f"entries must lie in [0, 1], got range [{P.min():.6g}, {P.max():.6g}]"
            )
        P = P.copy()
        P.setflags(write=False)
        object.__setattr__(self, "entries", P)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BlockPartitionView:
    """Index bookkeeping for a matrix sorted by (meta-community, community).

    ``perm[r]`` is the original index of the node placed at sorted row ``r``,
    so ``M[np.ix_(perm, perm)]`` is the sorted matrix.
    """

    perm: np.ndarray
    community_order: np.ndarray
    community_slices: tuple
    meta_slices: tuple

    @property
    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.perm.size)
        return inv

    def block(self, M: np.ndarray, k1: int, k2: int) -> np.ndarray:
        return M[self.community_slices[k1], self.community_slices[k2]]

    def meta_block(self, M: np.ndarray, l1: int, l2: int) -> np.ndarray:
        return M[self.meta_slices[l1], self.meta_slices[l2]]

    def block_column(self, M: np.ndarray, l: int, k: int) -> np.ndarray:
        """Rows of meta-community ``l`` against columns of community ``k``."""
        return M[self.meta_slices[l], self.community_slices[k]]


def block_view(z: Clustering, c: Clustering) -> BlockPartitionView:
    """Canonical sort of nodes by ``(c(z(i)), z(i), i)``."""
    _check_nested(z, c)
    K, L = z.n_clusters, c.n_clusters
    community_order = np.lexsort((np.arange(K), c.labels))
    rank = np.empty(K, dtype=np.int64)
    rank[community_order] = np.arange(K)
    perm = np.lexsort((np.arange(len(z)), rank[z.labels]))

    sizes = z.sizes
    community_slices = [None] * K
    start = 0
    for k in community_order:
        community_slices[k] = slice(start, start + sizes[k])
        start += sizes[k]
    meta_sizes = np.bincount(c.labels, weights=sizes, minlength=L).astype(np.int64)
    bounds = np.concatenate([[0], np.cumsum(meta_sizes)])
    meta_slices = tuple(slice(int(bounds[l]), int(bounds[l + 1])) for l in range(L))
    perm.setflags(write=False)
    return BlockPartitionView(perm, community_order, tuple(community_slices), meta_slices)


def permute_to_blocks(M, z: Clustering, c: Clustering):
    """Reorder ``M`` so communities are contiguous and grouped by meta-community.

    Returns the reordered matrix and the :class:`BlockPartitionView` that
    indexes its blocks.
    """
    M = as_matrix(M)
    if M.shape != (len(z), len(z)):
        raise ValueError(f"matrix shape {M.shape} does not match {len(z)} nodes")
    view = block_view(z, c)
    return M[np.ix_(view.perm, view.perm)], view


def unpermute(M_sorted: np.ndarray, view: BlockPartitionView) -> np.ndarray:
    inv = view.inverse
    return M_sorted[np.ix_(inv, inv)]


def block_average(P, z: Clustering) -> np.ndarray:
    """Matrix of mean connection probabilities between communities."""
    P = as_matrix(P)
    if P.shape != (len(z), len(z)):
        raise ValueError(f"matrix shape {P.shape} does not match {len(z)} nodes")
    Z = z.matrix()
    sizes = z.sizes.astype(np.float64)
    return (Z.T @ P @ Z) / np.outer(sizes, sizes)


class ModelKind(str, Enum):
    SBM = "SBM"
    DCBM = "DCBM"
    NBM = "NBM"
    PABM = "PABM"


@dataclass(frozen=True)
class NbmParameters:
    """Block means ``B`` (K x K), heterogeneity ``H`` (n x L) and both clusterings.

    Rows of ``H`` are in original node order. Every sub-vector
    ``H[z == k, l]`` must sum to the size of community ``k``.
    """

    B: np.ndarray
    H: np.ndarray
    z: Clustering
    c: Clustering
    atol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        _check_nested(self.z, self.c)
        B = np.asarray(self.B, dtype=np.float64)
        H = np.asarray(self.H, dtype=np.float64)
        if H.ndim == 1:
            H = H[:, None]
        K, L, n = self.z.n_clusters, self.c.n_clusters, len(self.z)
        if B.shape != (K, K):
            raise ValueError(f"B must be {K}x{K}, got {B.shape}")
        if H.shape != (n, L):
            raise ValueError(f"H must be {n}x{L}, got {H.shape}")
        if not np.allclose(B, B.T, rtol=0, atol=self.atol):
            raise ValueError("B must be symmetric")
        if B.min() < 0 or B.max() > 1:
            raise ValueError("B entries must lie in [0, 1]")
        if H.min() < 0:
            raise ValueError("H must be nonnegative")
        sums = self.z.matrix().T @ H
        target = self.z.sizes[:, None]
        if not np.allclose(sums, target, rtol=0, atol=self.atol * max(1, n)):
            raise ValueError("each sub-vector of H must sum to its community size")
        B, H = B.copy(), H.copy()
        B.setflags(write=False)
        H.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "H", H)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def K(self) -> int:
        return self.z.n_clusters

    @property
    def L(self) -> int:
        return self.c.n_clusters

    def replicated_heterogeneity(self) -> np.ndarray:
        """The n x K matrix whose column ``k`` is ``H[:, c(k)]``."""
        return self.H[:, self.c.labels]


def build_probability(params: NbmParameters) -> ProbabilityMatrix:
    """Assemble ``P`` with ``P[i, j] = B[z_i, z_j] * H[i, c(z_j)] * H[j, c(z_i)]``."""
    zl = params.z.labels
    meta = params.c.labels[zl]
    row_factor = params.H[:, meta]  # row_factor[i, j] = H[i, c(z_j)]
    P = params.B[np.ix_(zl, zl)] * row_factor * row_factor.T
    # the two triangles round differently; mirror one so P is exactly symmetric
    P = np.triu(P) + np.triu(P, 1).T
    if P.max() > 1 + 1e-12:
        raise ProbabilityRangeError(
            f"probability {P.max():.6g} exceeds one; rescale B or H"
        )
    return ProbabilityMatrix(np.clip(P, 0.0, 1.0))


def model_kind(params: NbmParameters, atol: float = 1e-9) -> ModelKind:
    # K == 1 has no community structure, so it is classified as SBM/DCBM.
    if params.L == params.K and params.K > 1:
        return ModelKind.PABM
    if params.L == 1:
        if np.allclose(params.H, 1.0, rtol=0, atol=atol):
            return ModelKind.SBM
        return ModelKind.DCBM
    return ModelKind.NBM
