"""Partition recovery from snapshots and partition-quality scores.

The pipeline is: top-k covariance eigenvectors, row normalization, k-means.
Labels are 0-based cluster indices; every score here is invariant to
relabeling, so the base does not matter to callers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.optimize

from .spectral import (
    EigenPairs,
    KMeansResult,
    covariance_spectrum,
    kmeans,
    procrustes_align,
    row_normalize,
    symmetric_eig,
)

_GAP_RTOL = 1e-12
_DISTINCT_ROW_DECIMALS = 6


@dataclass
class PartitionResult:
    """Recovered labels plus the spectral objects they came from."""

    labels: np.ndarray
    centroids: np.ndarray
    eigen: EigenPairs
    embedding: np.ndarray
    kmeans: KMeansResult
    diagnostics: dict = field(default_factory=dict)


@dataclass
class MisclassificationReport:
    rate: float
    misclassified: np.ndarray
    self_distances: np.ndarray
    alignment: np.ndarray


def _cluster(pairs: EigenPairs, k: int, seed: int, restarts: int) -> PartitionResult:
    embedding, zero_rows = row_normalize(pairs.vectors)
    km = kmeans(embedding, k, restarts=restarts, seed=seed)
    norms = np.linalg.norm(pairs.vectors, axis=1)
    no_gap: Optional[bool] = None
    if pairs.values_all is not None and pairs.values_all.shape[0] > k:
        magnitudes = np.abs(pairs.values_all)
        gap = magnitudes[k - 1] - magnitudes[k]
        no_gap = bool(gap <= _GAP_RTOL * max(1.0, magnitudes[0]))
    diagnostics = {
        "zero_rows": zero_rows,
        "objective": km.objective,
        "rank_deficient": pairs.rank_deficient,
        "no_spectral_gap": no_gap,
        "min_row_norm": float(norms.min()),
    }
    return PartitionResult(
        labels=km.labels,
        centroids=km.centroids,
        eigen=pairs,
        embedding=embedding,
        kmeans=km,
        diagnostics=diagnostics,
    )


def recover_partition(
    snapshots, k: int, seed: int = 0, restarts: int = 10
) -> PartitionResult:
    """Recover k groups from a snapshot set (SVD route, no n-by-n matrix)."""
    return _cluster(covariance_spectrum(snapshots, k), k, seed, restarts)


def recover_from_covariance(
    matrix: np.ndarray, k: int, seed: int = 0, restarts: int = 10
) -> PartitionResult:
    """Recover k groups from an explicit symmetric covariance matrix."""
    pairs = symmetric_eig(matrix)
    if not 1 <= k <= pairs.values.shape[0]:
        raise ValueError(f"k={k} outside [1, n={pairs.values.shape[0]}]")
    top = EigenPairs(
        values=pairs.values[:k],
        vectors=pairs.vectors[:, :k],
        rank_deficient=pairs.rank_deficient,
        values_all=pairs.values_all,
    )
    return _cluster(top, k, seed, restarts)


def overlap_score(predicted, truth) -> float:
    """Chance-corrected label agreement in [~0, 1] (1 means perfect).

    Matches predicted to true groups with the Hungarian algorithm on the
    confusion matrix, then rescales so that always guessing the largest true
    group scores 0.
    """
    predicted = np.asarray(predicted).ravel()
    truth = np.asarray(truth).ravel()
    if predicted.shape != truth.shape:
        raise ValueError("label vectors must have the same length")
    n = truth.shape[0]
    if n == 0:
        raise ValueError("empty label vectors")
    true_ids, true_counts = np.unique(truth, return_counts=True)
    chance = true_counts.max() / n
    if chance == 1.0:
        raise ValueError("truth has a single group; overlap is undefined")
    _, t = np.unique(truth, return_inverse=True)
    _, p = np.unique(predicted, return_inverse=True)
    size = max(true_ids.shape[0], int(p.max()) + 1)
    confusion = np.zeros((size, size), dtype=np.int64)
    np.add.at(confusion, (t, p), 1)
    rows, cols = scipy.optimize.linear_sum_assignment(confusion, maximize=True)
    actual = confusion[rows, cols].sum() / n
    return float((actual - chance) / (1.0 - chance))


def _distinct_rows(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rounded = np.round(matrix, _DISTINCT_ROW_DECIMALS)
    _, first_idx, inverse = np.unique(
        rounded, axis=0, return_index=True, return_inverse=True
    )
    return first_idx, inverse


def misclassification_rate(
    embedding: np.ndarray,
    population: np.ndarray,
    km: KMeansResult,
) -> MisclassificationReport:
    """Fraction of nodes whose fitted centroid sits closer to a foreign group.

    ``population`` holds the expected model's eigenvector rows (one distinct
    row per group); rows are scaled to unit norm here so they live on the
    same sphere as the fitted centroids. The population is rotated onto the
    fitted embedding with the Procrustes minimizer, after which node i is
    misclassified when its assigned centroid is strictly closer to some other
    group's row than to its own. Any misclassified node necessarily sits at
    least 1/sqrt(2) from its own row.
    """
    embedding = np.asarray(embedding, dtype=np.float64)
    population = np.asarray(population, dtype=np.float64)
    if embedding.shape != population.shape:
        raise ValueError("embedding and population matrices must match in shape")
    population, _ = row_normalize(population)
    rotation = procrustes_align(embedding, population)
    rotated = population @ rotation
    first_idx, groups = _distinct_rows(population)
    group_rows = rotated[first_idx]
    fitted = km.centroids[km.labels]
    self_dist = np.linalg.norm(fitted - rotated, axis=1)
    all_dist = np.linalg.norm(
        fitted[:, None, :] - group_rows[None, :, :], axis=2
    )
    all_dist[np.arange(embedding.shape[0]), groups] = np.inf
    other_dist = all_dist.min(axis=1) if group_rows.shape[0] > 1 else np.full(
        embedding.shape[0], np.inf
    )
    misclassified = np.flatnonzero(self_dist > other_dist)
    return MisclassificationReport(
        rate=misclassified.shape[0] / embedding.shape[0],
        misclassified=misclassified,
        self_distances=self_dist,
        alignment=rotation,
    )
