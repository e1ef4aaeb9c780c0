"""Closed-form deviation and error bounds.

Pure formula evaluation: nothing here samples or checks model assumptions.
The minimum-degree gate that makes the deviation bound meaningful lives in
``model.in_concentration_class``; callers combine the two.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np


def _coeff_factor(coeffs: Optional[Sequence[float]]) -> float:
    if coeffs is None:
        return 1.0
    coeffs = [float(c) for c in coeffs]
    if any(c < 0.0 for c in coeffs):
        raise ValueError("bound requires non-negative filter coefficients")
    return float(sum((l + 1) * c for l, c in enumerate(coeffs)))


def bound_M(
    n: int,
    eps: float,
    delta_min: float,
    coeffs: Optional[Sequence[float]] = None,
) -> float:
    """High-probability bound on the normalized-adjacency deviation.

    With ``coeffs`` given, returns the filtered version (the plain bound
    times sum of l * coeffs[l-1]).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if delta_min <= 0.0:
        raise ValueError("delta_min must be positive")
    base = 3.0 * np.sqrt(3.0 * np.log(4.0 * n / eps) / delta_min)
    return float(base * _coeff_factor(coeffs))


def _rank_expression(
    n: int, k: int, mu: Sequence[float], deviation: float, horizon: int
) -> float:
    mu = np.asarray(mu, dtype=np.float64)
    if mu.shape[0] != k:
        raise ValueError(f"expected {k} eigenvalues, got {mu.shape[0]}")
    if n < k:
        raise ValueError("n must be at least k")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if deviation < 0.0:
        raise ValueError("deviation must be non-negative")
    spikes = np.minimum(1.0, np.abs(mu[1:]) + deviation) ** (2 * horizon)
    tail = (n - k) * deviation ** (2 * horizon)
    return float(1.0 + spikes.sum() + tail)


def bound_effective_rank(
    n: int, k: int, mu: Sequence[float], deviation: float, horizon: int
) -> float:
    """Bound on trace/spectral-norm of the realized 2T-step covariance."""
    return _rank_expression(n, k, mu, deviation, horizon)


def bound_B(
    horizon: int,
    s: int,
    n: int,
    k: int,
    mu: Sequence[float],
    deviation: float,
    C: float = 1.0,
) -> float:
    """Sample-covariance deviation bound C * rank-expression * sqrt(ln(s)/s).

    ``mu`` holds the k structural eigenvalues (of the filtered expected
    operator when a non-trivial filter is in play) and ``deviation`` the
    matching realized-operator bound. C absorbs the universal constant of
    the underlying concentration statement; default 1.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if s < 2:
        raise ValueError("s must be >= 2")
    if C <= 0.0:
        raise ValueError("C must be positive")
    prefactor = _rank_expression(n, k, mu, deviation, horizon)
    return float(C * prefactor * np.sqrt(np.log(s) / s))


def bound_misclassification(
    k: int, n: int, tau: float, xi_k: float, bracket: float
) -> float:
    """Bound on the misclassified fraction: 64k/(n tau^2 xi_k^2) * bracket^2.

    ``bracket`` is the operator-level error term (2*T*M_f + B_f(T));
    ``tau`` the smallest eigenvector row norm involved; ``xi_k`` the k-th
    ensemble covariance eigenvalue.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    if tau <= 0.0 or xi_k <= 0.0:
        raise ValueError("tau and xi_k must be positive")
    if bracket < 0.0:
        raise ValueError("bracket must be non-negative")
    return float(64.0 * k / (n * tau**2 * xi_k**2) * bracket**2)


def bound_eta(horizon: int, deviation: float, b_term: float, lambda2: float) -> float:
    """Relative-error bound for the eigenvalue estimator of the affinity scale."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if deviation < 0.0 or b_term < 0.0:
        raise ValueError("deviation and b_term must be non-negative")
    if lambda2 <= -1.0:
        raise ValueError("lambda2 must exceed -1")
    bracket = 2.0 * horizon * deviation + b_term
    return float(bracket ** (1.0 / (2.0 * horizon)) / (lambda2 + 1.0))
