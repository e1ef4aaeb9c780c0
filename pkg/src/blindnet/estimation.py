"""Affinity-scale estimators for the two-group planted partition.

Both estimators assume k=2 equal-size groups with known edge density
rho = (a + b) / (2n) and an assortative model (a > b). They return the
within-group rate a; b follows as 2*rho*n - a.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spectral import psd_power


@dataclass
class EstimateResult:
    a_hat: float
    method: str
    horizon: int
    rho: float
    n: int
    clamped: bool = False
    eta: Optional[float] = None


def _check_common(horizon: int, rho: float, n: int) -> None:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    if n <= 0:
        raise ValueError("n must be positive")


def estimate_a_eigenvalue(
    lambda2: float, horizon: int, rho: float, n: int
) -> EstimateResult:
    """Invert the second covariance eigenvalue: a = lambda2^(1/2T)*rho*n + rho*n.

    lambda2 is clamped into [0, 1] before taking the root; clamping is
    reported, not silently absorbed.
    """
    _check_common(horizon, rho, n)
    if not np.isfinite(lambda2):
        raise ValueError("lambda2 must be finite")
    clamped = not 0.0 <= lambda2 <= 1.0
    value = min(max(lambda2, 0.0), 1.0)
    root = value ** (1.0 / (2.0 * horizon))
    return EstimateResult(
        a_hat=float(root * rho * n + rho * n),
        method="eigenvalue",
        horizon=horizon,
        rho=rho,
        n=n,
        clamped=clamped,
    )


def estimate_a_partition(
    sigma_hat: np.ndarray,
    horizon: int,
    labels,
    rho: float,
    n: Optional[int] = None,
) -> EstimateResult:
    """Invert the mean cross-group entry of the covariance's (1/T)-th power.

    With x that mean, a = rho*n*sqrt(1 - n*x) + rho*n; the radicand is
    clamped at zero (reported) when noise pushes it negative.
    """
    sigma_hat = np.asarray(sigma_hat, dtype=np.float64)
    labels = np.asarray(labels).ravel()
    if sigma_hat.ndim != 2 or sigma_hat.shape[0] != sigma_hat.shape[1]:
        raise ValueError("covariance must be square")
    if labels.shape[0] != sigma_hat.shape[0]:
        raise ValueError("labels length must match covariance size")
    if n is None:
        n = sigma_hat.shape[0]
    _check_common(horizon, rho, n)
    groups = np.unique(labels)
    if groups.shape[0] != 2:
        raise ValueError(f"need exactly two groups, got {groups.shape[0]}")
    rooted = psd_power(sigma_hat, 1.0 / horizon)
    cross = labels[:, None] != labels[None, :]
    x = float(rooted[cross].mean())
    radicand = 1.0 - n * x
    clamped = radicand < 0.0
    radicand = max(radicand, 0.0)
    return EstimateResult(
        a_hat=float(rho * n * np.sqrt(radicand) + rho * n),
        method="partition",
        horizon=horizon,
        rho=rho,
        n=int(n),
        clamped=clamped,
    )


def relative_error(a_hat: float, a_true: float) -> float:
    """|a_hat - a| / a."""
    if a_true <= 0.0:
        raise ValueError("true value must be positive")
    return abs(a_hat - a_true) / a_true


def estimate_affinity_general(*args, **kwargs):
    """Placeholder for models beyond two equal groups."""
    raise NotImplementedError(
        "general affinity estimation is not supported; only the two-group "
        "equal-size estimators (estimate_a_eigenvalue, estimate_a_partition) "
        "are implemented"
    )
