"""Stochastic block models: parameterizations, expected matrices, sampling.

A model is a symmetric affinity matrix together with group sizes. Nodes are
numbered so that groups are contiguous (node i belongs to the group whose
cumulative size bracket contains i); ``permute_graph`` exists for tests that
need to break that layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import _seeds
from .spectral import symmetric_eig

RANK_RTOL = 1e-10
DENSE_NODE_LIMIT = 5000


@dataclass(frozen=True)
class SbmModel:
    """Block model given by group sizes and a k-by-k affinity matrix."""

    group_sizes: tuple[int, ...]
    affinity: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.group_sizes)
        object.__setattr__(self, "group_sizes", sizes)
        omega = np.asarray(self.affinity, dtype=np.float64)
        object.__setattr__(self, "affinity", omega)
        if len(sizes) == 0 or any(s <= 0 for s in sizes):
            raise ValueError("group sizes must be positive integers")
        k = len(sizes)
        if omega.shape != (k, k):
            raise ValueError(
                f"affinity shape {omega.shape} does not match {k} groups"
            )
        if not np.allclose(omega, omega.T, atol=1e-12):
            raise ValueError("affinity matrix must be symmetric")
        if omega.min() < 0.0 or omega.max() > 1.0:
            raise ValueError("affinity entries must lie in [0, 1]")
        scaled = omega * np.asarray(sizes, dtype=np.float64)[None, :]
        svals = np.linalg.svd(scaled, compute_uv=False)
        if svals[-1] <= RANK_RTOL * max(svals[0], 1.0):
            raise ValueError(
                "affinity times group sizes is rank deficient; "
                "expected adjacency would not have full block rank"
            )

    @property
    def n(self) -> int:
        return int(sum(self.group_sizes))

    @property
    def k(self) -> int:
        return len(self.group_sizes)

    def labels(self) -> np.ndarray:
        """Ground-truth group index (0-based) per node."""
        return np.repeat(np.arange(self.k), self.group_sizes)


@dataclass(frozen=True)
class PlantedPartitionParams:
    """Equal-affinity-diagonal model: a/n within groups, b/n across."""

    n: int
    k: int
    a: float
    b: float

    def __post_init__(self):
        if self.n <= 0 or self.k <= 0:
            raise ValueError("n and k must be positive")
        if self.k > self.n:
            raise ValueError("more groups than nodes")
        for name, value in (("a", self.a), ("b", self.b)):
            if not 0.0 <= value <= self.n:
                raise ValueError(
                    f"{name}={value} gives a probability outside [0, 1]"
                )

    def omega(self) -> np.ndarray:
        n, k = self.n, self.k
        return ((self.a - self.b) / n) * np.eye(k) + (self.b / n) * np.ones((k, k))

    @property
    def mean_degree(self) -> float:
        return (self.a + (self.k - 1) * self.b) / self.k


@dataclass
class Graph:
    """Sampled undirected graph with 0/1 sparse adjacency."""

    n: int
    adjacency: sp.csr_matrix
    degrees: np.ndarray

    @classmethod
    def from_adjacency(cls, adjacency: sp.spmatrix) -> "Graph":
        adj = sp.csr_matrix(adjacency)
        adj.sum_duplicates()
        degrees = np.asarray(adj.sum(axis=1)).ravel()
        return cls(n=adj.shape[0], adjacency=adj, degrees=degrees)


@dataclass(frozen=True)
class ExpectedMatrices:
    """Dense expected adjacency and its degree-normalized form."""

    adjacency: np.ndarray
    normalized: np.ndarray
    degrees: np.ndarray
    delta_min: float


@dataclass(frozen=True)
class ConcentrationCheck:
    passes: bool
    delta_min: float
    threshold: float


def _default_sizes(n: int, k: int) -> tuple[int, ...]:
    base, extra = divmod(n, k)
    return tuple(base + (1 if g < extra else 0) for g in range(k))


def build_planted(
    n: int,
    k: int,
    a: float,
    b: float,
    group_sizes: Optional[Sequence[int]] = None,
) -> SbmModel:
    """Build the planted-partition model with the given in/out rates."""
    params = PlantedPartitionParams(n=n, k=k, a=a, b=b)
    sizes = _default_sizes(n, k) if group_sizes is None else tuple(group_sizes)
    if sum(sizes) != n:
        raise ValueError(f"group sizes sum to {sum(sizes)}, expected n={n}")
    return SbmModel(group_sizes=sizes, affinity=params.omega())


def params_from_snr(
    n: int, k: int, snr: float, mean_degree: float
) -> PlantedPartitionParams:
    """Solve for (a, b) with the given signal-to-noise ratio and mean degree.

    Uses the assortative root (a > b); requires snr <= mean_degree so that
    b stays non-negative.
    """
    if snr <= 0 or mean_degree <= 0:
        raise ValueError("snr and mean_degree must be positive")
    gap = k * np.sqrt(snr * mean_degree)
    a = mean_degree + gap * (k - 1) / k
    b = a - gap
    if b < 0:
        raise ValueError(
            f"snr={snr} with mean_degree={mean_degree} forces b < 0"
        )
    return PlantedPartitionParams(n=n, k=k, a=float(a), b=float(b))


def snr_of(params: PlantedPartitionParams) -> float:
    """Signal-to-noise ratio of a planted partition; 1 is the detectability edge."""
    k = params.k
    denom = k * params.a + k * (k - 1) * params.b
    return (params.a - params.b) ** 2 / denom


def expected_matrices(model: SbmModel, allow_large: bool = False) -> ExpectedMatrices:
    """Dense expected adjacency and normalized adjacency of the model."""
    n = model.n
    if n > DENSE_NODE_LIMIT and not allow_large:
        raise ValueError(
            f"n={n} exceeds the dense-path limit {DENSE_NODE_LIMIT}; "
            "pass allow_large=True to override"
        )
    labels = model.labels()
    adjacency = model.affinity[np.ix_(labels, labels)]
    degrees = adjacency.sum(axis=1)
    if degrees.min() <= 0.0:
        node = int(degrees.argmin())
        raise ValueError(f"node {node} has zero expected degree")
    inv_sqrt = 1.0 / np.sqrt(degrees)
    normalized = adjacency * inv_sqrt[:, None] * inv_sqrt[None, :]
    return ExpectedMatrices(
        adjacency=adjacency,
        normalized=normalized,
        degrees=degrees,
        delta_min=float(degrees.min()),
    )


def normalized_affinity(model: SbmModel) -> np.ndarray:
    """k-by-k matrix carrying the nonzero spectrum of the expected normalized adjacency."""
    sizes = np.asarray(model.group_sizes, dtype=np.float64)
    block_degrees = model.affinity @ sizes
    if block_degrees.min() <= 0.0:
        group = int(block_degrees.argmin())
        raise ValueError(f"group {group} has zero expected degree")
    scale = np.sqrt(sizes) / np.sqrt(block_degrees)
    return model.affinity * np.outer(scale, scale)


def normalized_affinity_spectrum(model: SbmModel) -> np.ndarray:
    """The k nonzero eigenvalues, sorted by decreasing magnitude."""
    pairs = symmetric_eig(normalized_affinity(model))
    return pairs.values


def expected_spectral_embedding(model: SbmModel) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and row-normalized top-k eigenvectors of the expected model.

    The returned n-by-k matrix has one distinct orthonormal row per group
    (the population centroids); its rows are constant within groups.
    """
    pairs = symmetric_eig(normalized_affinity(model))
    return pairs.values, pairs.vectors[model.labels()]


def sample_graph(model: SbmModel, seed: int) -> Graph:
    """Draw a graph: each (unordered) pair independently, plus self-loops.

    Entry (i, j) appears with probability ``affinity[g_i, g_j]``; the draw is
    keyed by ``(seed, graph-domain)`` so it is independent of call order.
    """
    rng = _seeds.substream(seed, _seeds.GRAPH)
    sizes = model.group_sizes
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    k = model.k
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    for g in range(k):
        for h in range(g, k):
            p = model.affinity[g, h]
            block = rng.random((sizes[g], sizes[h]))
            if g == h:
                hit = np.triu(block < p)
            else:
                hit = block < p
            r, c = np.nonzero(hit)
            rows.append(r + offsets[g])
            cols.append(c + offsets[h])
    upper_r = np.concatenate(rows)
    upper_c = np.concatenate(cols)
    off_diag = upper_r != upper_c
    all_r = np.concatenate([upper_r, upper_c[off_diag]])
    all_c = np.concatenate([upper_c, upper_r[off_diag]])
    n = model.n
    adj = sp.coo_matrix(
        (np.ones(all_r.shape[0]), (all_r, all_c)), shape=(n, n)
    ).tocsr()
    return Graph.from_adjacency(adj)


def permute_graph(graph: Graph, permutation: Sequence[int]) -> Graph:
    """Relabel nodes: new node i is old node permutation[i]."""
    p = np.asarray(permutation)
    if sorted(p.tolist()) != list(range(graph.n)):
        raise ValueError("not a permutation of range(n)")
    return Graph.from_adjacency(graph.adjacency[p][:, p])


def expected_degrees(model: SbmModel) -> np.ndarray:
    """Expected degree per node, computed blockwise (no dense allocation)."""
    sizes = np.asarray(model.group_sizes, dtype=np.float64)
    return (model.affinity @ sizes)[model.labels()]


def in_concentration_class(model: SbmModel, eps: float) -> ConcentrationCheck:
    """Check the minimum-degree condition that licenses the deviation bound."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    delta_min = float(expected_degrees(model).min())
    threshold = 27.0 * np.log(4.0 * model.n / eps)
    return ConcentrationCheck(
        passes=delta_min > threshold, delta_min=delta_min, threshold=float(threshold)
    )
