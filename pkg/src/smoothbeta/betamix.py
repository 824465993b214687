"""Beta distributions and normalized mixtures of Beta distributions.

A posterior over a success probability is either a single ``BetaParams``
(static observations) or a ``BetaMixture``: a convex combination of
components ``Beta(alpha + i, beta + n - i)`` that all share the same total
pseudo-count ``alpha + beta + n``. Moments of both are closed-form, which is
what every error metric in this package consumes; no sampling is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Components whose normalized weight falls below this are dropped; the
# remainder is renormalized. Keeps mixtures small with no effect on moments
# at the tolerances used anywhere in this package.
WEIGHT_PRUNE_EPS = 1e-15


def normalize(weights) -> np.ndarray:
    """Scale a vector of nonnegative weights so it sums to one.

    Raises ``ValueError("degenerate weight vector")`` if any weight is
    negative, non-finite, or if no weight is strictly positive.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("degenerate weight vector")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0):
        raise ValueError("degenerate weight vector")
    total = w.sum()
    if total <= 0.0:
        raise ValueError("degenerate weight vector")
    return w / total


@dataclass(frozen=True)
class BetaParams:
    """Parameters of a single Beta(alpha, beta) distribution, both > 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b) and a > 0.0 and b > 0.0):
            raise ValueError(f"Beta parameters must be positive finite, got ({a}, {b})")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @property
    def moment2(self) -> float:
        """Raw second moment: alpha (alpha+1) / ((alpha+beta)(alpha+beta+1))."""
        s = self.alpha + self.beta
        return self.alpha * (self.alpha + 1.0) / (s * (s + 1.0))

    @property
    def variance(self) -> float:
        return self.moment2 - self.mean**2


# Reference prior used as the default everywhere.
UNIFORM = BetaParams(1.0, 1.0)


@dataclass(frozen=True, eq=False)
class BetaMixture:
    """Normalized mixture ``sum_i C_i Beta(alpha + i, beta + total - i)``.

    ``base`` holds the prior (alpha, beta); ``total`` is the number of
    absorbed observations; component ``indices[k]`` counts success-side
    pseudo-count increments. Instances are immutable; build them with
    :meth:`from_weights` or :meth:`from_prior`, which normalize and prune.
    """

    base: BetaParams
    total: int
    indices: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        w = np.asarray(self.weights, dtype=np.float64)
        n = int(self.total)
        if n < 0:
            raise ValueError("total observation count must be nonnegative")
        if idx.shape != w.shape or idx.ndim != 1 or idx.size == 0:
            raise ValueError("indices and weights must be matching 1-d arrays")
        if np.any(idx < 0) or np.any(idx > n):
            raise ValueError(f"component indices must lie in [0, {n}]")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("component indices must be strictly increasing")
        if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        idx.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "total", n)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_weights(cls, base: BetaParams, total: int, indices, weights) -> "BetaMixture":
        """Normalize ``weights``, drop components below ``WEIGHT_PRUNE_EPS``, sort by index."""
        idx = np.asarray(indices, dtype=np.int64)
        w = normalize(weights)
        order = np.argsort(idx, kind="stable")
        idx, w = idx[order], w[order]
        keep = w >= WEIGHT_PRUNE_EPS
        if not np.all(keep):
            idx, w = idx[keep], w[keep]
            w = w / w.sum()
        return cls(base, total, idx, w)

    @classmethod
    def from_prior(cls, prior: BetaParams) -> "BetaMixture":
        """The prior itself, as a one-component mixture with no observations."""
        return cls(prior, 0, np.array([0], dtype=np.int64), np.array([1.0]))

    def __len__(self) -> int:
        return self.indices.size

    @property
    def mean(self) -> float:
        a, b, n = self.base.alpha, self.base.beta, self.total
        return float(np.dot(self.weights, (a + self.indices) / (a + b + n)))

    @property
    def moment2(self) -> float:
        a, b, n = self.base.alpha, self.base.beta, self.total
        ai = a + self.indices
        tot = a + b + n
        return float(np.dot(self.weights, ai * (ai + 1.0) / (tot * (tot + 1.0))))

    @property
    def variance(self) -> float:
        return self.moment2 - self.mean**2

    def pdf(self, theta) -> np.ndarray:
        """Mixture density on [0, 1], evaluated pointwise."""
        from scipy.stats import beta as beta_dist

        th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        a, b, n = self.base.alpha, self.base.beta, self.total
        comp = beta_dist.pdf(th[:, None], a + self.indices, b + n - self.indices)
        return comp @ self.weights

    def reflect(self) -> "BetaMixture":
        """Distribution of ``1 - theta``: Beta(a, b) components map to Beta(b, a)."""
        base = BetaParams(self.base.beta, self.base.alpha)
        return BetaMixture.from_weights(base, self.total, self.total - self.indices, self.weights)
