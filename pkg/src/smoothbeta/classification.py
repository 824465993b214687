"""Binary classification from posterior beliefs, and Bayes-risk bookkeeping.

The classifier thresholds the posterior mean at 0.5 (ties predict 1). Risk of
a label against the true success probability p is p for label 0 and 1 - p for
label 1; the optimal rule predicts ``1_{p >= 0.5}`` and incurs min(p, 1 - p).
"""

from __future__ import annotations

import numpy as np

from .betamix import BetaParams

# Near-zero pseudo-counts: classification reduces to a majority vote over the
# neighborhood ("no-prior" mode). With zero neighbors the mean is 0.5 and the
# tie rule predicts 1.
NO_PRIOR = BetaParams(1e-9, 1e-9)


def classify(posterior) -> int:
    """1 if the posterior mean is at least 0.5, else 0."""
    return 1 if posterior.mean >= 0.5 else 0


def risk(label: int, p: float) -> float:
    """Misclassification probability of ``label`` when outcomes are Bernoulli(p)."""
    if label not in (0, 1):
        raise ValueError("label must be 0 or 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return 1.0 - p if label == 1 else p


def bayes_optimal(p: float) -> tuple[int, float]:
    """Optimal label and its risk: (1_{p >= 0.5}, min(p, 1 - p))."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    label = 1 if p >= 0.5 else 0
    return label, min(p, 1.0 - p)


def informative_prior(mean: float, var: float) -> BetaParams:
    """Beta parameters moment-matched to a target mean and variance.

    Requires ``0 < var < mean (1 - mean)``; outside that range no Beta
    distribution has these moments.
    """
    if not 0.0 < mean < 1.0:
        raise ValueError(f"prior mean must lie strictly inside (0, 1), got {mean}")
    if var <= 0.0:
        raise ValueError(f"prior variance must be positive, got {var}")
    if var >= mean * (1.0 - mean):
        raise ValueError("variance infeasible for Beta")
    nu = mean * (1.0 - mean) / var - 1.0
    return BetaParams(mean * nu, (1.0 - mean) * nu)


def informative_prior_arrays(mean, var) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`informative_prior`; returns (alpha, beta) arrays."""
    m = np.asarray(mean, dtype=np.float64)
    v = np.asarray(var, dtype=np.float64)
    if np.any(m <= 0.0) or np.any(m >= 1.0):
        raise ValueError("prior means must lie strictly inside (0, 1)")
    if np.any(v <= 0.0) or np.any(v >= m * (1.0 - m)):
        raise ValueError("variance infeasible for Beta")
    nu = m * (1.0 - m) / v - 1.0
    return m * nu, (1.0 - m) * nu
