"""Spectral building blocks: covariance spectra, row normalization, k-means.

Conventions shared by every routine here:

* eigenpairs are sorted by decreasing magnitude; on a magnitude tie the
  positive eigenvalue comes first, then input order;
* each eigenvector is flipped so its largest-magnitude entry is positive
  (first occurrence wins on a tie), making decompositions reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from . import _seeds, kernels

KMEANS_MAX_ITER = 300


@dataclass
class EigenPairs:
    """Eigenvalues/vectors under the module's ordering and sign conventions."""

    values: np.ndarray
    vectors: np.ndarray
    rank_deficient: bool = False
    values_all: Optional[np.ndarray] = None


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    objective: float
    n_iter: int
    restarts: int


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    lead = np.abs(vectors).argmax(axis=0)
    flip = vectors[lead, np.arange(vectors.shape[1])] < 0
    out = vectors.copy()
    out[:, flip] *= -1.0
    return out


def _magnitude_order(values: np.ndarray) -> np.ndarray:
    idx = np.arange(values.shape[0])
    return np.lexsort((idx, values < 0, -np.abs(values)))


def _check_symmetric(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.abs(matrix).max()))
    if np.abs(matrix - matrix.T).max() > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")
    return matrix


def symmetric_eig(matrix: np.ndarray) -> EigenPairs:
    """Full eigendecomposition of a symmetric matrix (magnitude-sorted)."""
    matrix = _check_symmetric(matrix)
    values, vectors = scipy.linalg.eigh(matrix)
    order = _magnitude_order(values)
    values = values[order]
    vectors = _fix_signs(vectors[:, order])
    return EigenPairs(values=values, vectors=vectors, values_all=values)


def _snapshot_array(snapshots) -> np.ndarray:
    data = getattr(snapshots, "data", snapshots)
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError("snapshots must form an n-by-s matrix")
    if data.shape[1] < 2:
        raise ValueError("need at least two snapshots")
    return data


def sample_covariance(snapshots) -> np.ndarray:
    """Centered second-moment matrix with 1/s normalization."""
    data = _snapshot_array(snapshots)
    centered = data - data.mean(axis=1, keepdims=True)
    cov = centered @ centered.T / data.shape[1]
    return (cov + cov.T) / 2.0


def covariance_spectrum(snapshots, k: int) -> EigenPairs:
    """Top-k covariance eigenpairs via thin SVD of the scaled snapshot matrix.

    Never forms the n-by-n covariance; eigenvalues are squared singular
    values of ``centered / sqrt(s)`` and eigenvectors are left singular
    vectors. ``values_all`` carries the whole min(n, s) spectrum.
    """
    data = _snapshot_array(snapshots)
    n, s = data.shape
    if not 1 <= k <= min(n, s):
        raise ValueError(f"k={k} outside [1, min(n, s)={min(n, s)}]")
    centered = (data - data.mean(axis=1, keepdims=True)) / np.sqrt(s)
    left, singular, _ = np.linalg.svd(centered, full_matrices=False)
    values = singular**2
    tol = singular[0] * max(n, s) * np.finfo(np.float64).eps
    rank_deficient = bool(singular[k - 1] <= tol)
    return EigenPairs(
        values=values[:k],
        vectors=_fix_signs(left[:, :k]),
        rank_deficient=rank_deficient,
        values_all=values,
    )


def row_normalize(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale rows to unit norm; zero rows are kept and their indices returned."""
    matrix = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    safe = np.where(norms == 0.0, 1.0, norms)
    return matrix / safe[:, None], zero_rows


def _kmeans_pp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    idx = int(rng.integers(n))
    centers[0] = points[idx]
    dist2 = ((points - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = dist2.sum()
        if total > 0.0:
            target = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(dist2), target, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centers[c] = points[idx]
        dist2 = np.minimum(dist2, ((points - centers[c]) ** 2).sum(axis=1))
    return centers


def _objective(points, labels, centroids) -> float:
    return float(((points - centroids[labels]) ** 2).sum())


def kmeans(
    points: np.ndarray,
    k: int,
    restarts: int = 10,
    seed: int = 0,
    max_iter: int = KMEANS_MAX_ITER,
) -> KMeansResult:
    """Best of ``restarts`` k-means++ / Lloyd runs.

    Each restart draws its seeding from the stream keyed by
    ``(seed, kmeans-domain, restart)``, so the winner does not depend on
    execution order; ties on the objective keep the earliest restart.
    Restarts approximate the exact minimizer that the misclassification
    theory assumes; on well-separated inputs they find it.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, n={n}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best: Optional[KMeansResult] = None
    for r in range(restarts):
        rng = _seeds.substream(seed, _seeds.KMEANS, r)
        init = _kmeans_pp(points, k, rng)
        labels, centroids, n_iter = kernels.lloyd(points, init, max_iter)
        objective = _objective(points, labels, centroids)
        if best is None or objective < best.objective:
            best = KMeansResult(
                labels=labels,
                centroids=centroids,
                objective=objective,
                n_iter=n_iter,
                restarts=restarts,
            )
    return best


def procrustes_align(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Orthogonal Q minimizing ||source - target @ Q|| in Frobenius norm."""
    source = np.asarray(source, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if source.shape != target.shape:
        raise ValueError("source and target must have matching shapes")
    left, _, right = np.linalg.svd(target.T @ source)
    return left @ right


def psd_power(matrix: np.ndarray, power: float) -> np.ndarray:
    """Matrix power through the eigendecomposition, clamping negatives to 0."""
    matrix = _check_symmetric(matrix)
    if power <= 0:
        raise ValueError("power must be positive")
    values, vectors = scipy.linalg.eigh(matrix)
    values = np.clip(values, 0.0, None)
    out = (vectors * values**power) @ vectors.T
    return (out + out.T) / 2.0


def effective_rank(matrix: np.ndarray) -> float:
    """Trace over spectral norm."""
    values = scipy.linalg.eigvalsh(_check_symmetric(matrix))
    top = float(np.abs(values).max())
    if top == 0.0:
        raise ValueError("effective rank of the zero matrix is undefined")
    return float(values.sum() / top)
