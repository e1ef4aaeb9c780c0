"""Diffusion dynamics on a graph: normalized adjacency, filters, snapshots.

One trajectory starts from an i.i.d. zero-mean unit-variance vector and is
pushed forward T times through a polynomial filter of the symmetrically
normalized adjacency. Only the time-T state is kept; s independent
trajectories form the snapshot matrix observed by the recovery pipeline.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from . import _seeds, kernels
from .model import Graph

FILTER_NORM_TOL = 1e-6
_POWER_ITERS = 100


class InitDistribution(enum.Enum):
    """Initial-condition law; both have zero mean and identity covariance."""

    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"


@dataclass(frozen=True)
class FilterSpec:
    """Polynomial filter sum(coeffs[l-1] * L^l, l=1..len(coeffs))."""

    coeffs: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) == 0:
            raise ValueError("filter needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise ValueError("filter coefficients must be finite")

    def eigenvalue_map(self, values: np.ndarray) -> np.ndarray:
        """Image of adjacency eigenvalues under the filter polynomial."""
        values = np.asarray(values, dtype=np.float64)
        out = np.zeros_like(values)
        power = np.ones_like(values)
        for c in self.coeffs:
            power = power * values
            out = out + c * power
        return out


@dataclass
class SnapshotSet:
    """Time-T states of s independent trajectories, one per column."""

    data: np.ndarray
    horizon: int
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def s(self) -> int:
        return self.data.shape[1]


def normalized_adjacency(graph: Graph) -> sp.csr_matrix:
    """D^{-1/2} A D^{-1/2} for a graph with no isolated nodes."""
    if graph.degrees.min() <= 0:
        node = int(graph.degrees.argmin())
        raise ValueError(f"node {node} is isolated; normalization undefined")
    inv_sqrt = 1.0 / np.sqrt(graph.degrees)
    scaled = graph.adjacency.multiply(inv_sqrt[:, None]).multiply(inv_sqrt[None, :])
    return sp.csr_matrix(scaled)


def apply_filter(operator, spec: FilterSpec, block: np.ndarray) -> np.ndarray:
    """One application of the filter polynomial to a vector or block."""
    block = np.ascontiguousarray(block, dtype=np.float64)
    sparse = sp.issparse(operator)
    if sparse:
        operator = sp.csr_matrix(operator)
    power = block
    out = None
    for c in spec.coeffs:
        power = kernels.csr_matmul_dense(operator, power) if sparse else operator @ power
        out = c * power if out is None else out + c * power
    return out


def filter_operator_norm(operator, spec: FilterSpec, seed: int = 0) -> float:
    """Power-iteration estimate of the filter's operator norm."""
    n = operator.shape[0]
    rng = _seeds.substream(seed, _seeds.NORM_CHECK)
    vec = rng.standard_normal(n)
    vec /= np.linalg.norm(vec)
    estimate = 0.0
    for _ in range(_POWER_ITERS):
        nxt = apply_filter(operator, spec, vec)
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return 0.0
        estimate = norm
        vec = nxt / norm
    return float(estimate)


def _initial_conditions(
    n: int, s: int, dist: InitDistribution, seed: int
) -> np.ndarray:
    cols = np.empty((n, s))
    for i in range(s):
        rng = _seeds.substream(seed, _seeds.INIT_COLUMN, i)
        if dist is InitDistribution.GAUSSIAN:
            cols[:, i] = rng.standard_normal(n)
        else:
            cols[:, i] = rng.integers(0, 2, size=n) * 2.0 - 1.0
    return cols


def simulate_snapshots(
    operator,
    spec: FilterSpec,
    horizon: int,
    s: int,
    dist: InitDistribution = InitDistribution.GAUSSIAN,
    seed: int = 0,
    check_norm: bool = True,
) -> SnapshotSet:
    """Simulate s trajectories for ``horizon`` steps and keep the final states.

    Column i is keyed by ``(seed, init-domain, i)``, so it does not depend on
    s or on evaluation order. A filter whose operator norm exceeds 1 (checked
    by power iteration) triggers a warning, not an error.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if s < 2:
        raise ValueError("need at least two trajectories")
    n = operator.shape[0]
    if check_norm:
        norm = filter_operator_norm(operator, spec, seed=seed)
        if norm > 1.0 + FILTER_NORM_TOL:
            warnings.warn(
                f"filter operator norm {norm:.6f} exceeds 1; "
                "dynamics will not be a contraction",
                stacklevel=2,
            )
    state = _initial_conditions(n, s, dist, seed)
    for _ in range(horizon):
        state = apply_filter(operator, spec, state)
    return SnapshotSet(
        data=state,
        horizon=horizon,
        metadata={
            "seed": int(seed),
            "s": int(s),
            "dist": dist.value,
            "coeffs": list(spec.coeffs),
        },
    )
