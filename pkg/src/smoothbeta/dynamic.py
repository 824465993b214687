"""Posterior inference for contextually influenced Bernoulli tests.

Each test succeeds with probability ``A * pi(x) + B`` for known per-test
coefficients with ``0 <= B <= 1`` and ``0 <= A + B <= 1``. Conditioning a
Beta prior on such a test yields a two-component Beta mixture; conditioning
on t tests yields a mixture over components Beta(alpha + i, beta + t - i)
whose weights follow a linear recursion (general case, O(t^2) total) or a
closed-form ratio recursion when A + B = 1 holds with constant coefficients
(O(t), the certainty-invariant case).

Neighborhood inference gathers the tests within l-inf distance delta of the
query point, replaces their coefficients by the neighborhood means, and runs
whichever recursion applies. ``exact_posterior_moments`` is an independent
quadrature oracle over the raw likelihood, used to validate all of this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import logsumexp

from .betamix import UNIFORM, BetaMixture, BetaParams
from .neighbors import NeighborIndex, as_points, delta_schedule

# Absolute slack when validating coefficient constraints; float means of valid
# per-test values can overshoot the bounds by a few ulps.
COEF_ATOL = 1e-12

# |A + B - 1| at or below this routes to the O(t) certainty-invariant recursion.
CERTAINTY_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class DynamicDataset:
    """Contextual experiments: locations, outcomes, and per-test (A, B)."""

    x: np.ndarray
    s: np.ndarray
    A: np.ndarray
    B: np.ndarray
    index: NeighborIndex

    @classmethod
    def build(cls, x, s, A, B) -> "DynamicDataset":
        pts = as_points(x)
        out = np.asarray(s, dtype=np.int64).reshape(-1)
        a = np.asarray(A, dtype=np.float64).reshape(-1)
        b = np.asarray(B, dtype=np.float64).reshape(-1)
        if not (len(pts) == out.size == a.size == b.size):
            raise ValueError("locations, outcomes, A, and B must have equal length")
        if out.size and not np.all((out == 0) | (out == 1)):
            raise ValueError("outcomes must be 0 or 1")
        _check_coefficients(a, b)
        for arr in (out, a, b):
            arr.setflags(write=False)
        return cls(pts, out, a, b, NeighborIndex(pts))

    def __len__(self) -> int:
        return len(self.s)

    @property
    def dim(self) -> int:
        return self.x.shape[1]


def _check_coefficients(A, B) -> None:
    a = np.asarray(A, dtype=np.float64)
    b = np.asarray(B, dtype=np.float64)
    ok = (
        np.all(np.isfinite(a))
        and np.all(np.isfinite(b))
        and np.all(b >= -COEF_ATOL)
        and np.all(b <= 1.0 + COEF_ATOL)
        and np.all(a + b >= -COEF_ATOL)
        and np.all(a + b <= 1.0 + COEF_ATOL)
    )
    if not ok:
        raise ValueError("invalid contextual coefficients: need 0 <= B <= 1 and 0 <= A+B <= 1")


def _step(C: np.ndarray, n: int, alpha: float, beta: float, s: int, A: float, B: float) -> np.ndarray:
    """One observation: dense weights over i=0..n -> normalized weights over i=0..n+1.

    Success:  C'_i  prop.  B C_i (beta+n-i) + (A+B) C_{i-1} (alpha+i-1)
    Failure:  C'_i  prop.  (1-B) C_i (beta+n-i) + (1-A-B) C_{i-1} (alpha+i-1)
    """
    # Clamp into the valid range so rounding noise cannot produce negative weights.
    B = min(max(B, 0.0), 1.0)
    ApB = min(max(A + B, 0.0), 1.0)
    lo, hi = (B, ApB) if s else (1.0 - B, 1.0 - ApB)
    i = np.arange(n + 1)
    new = np.zeros(n + 2)
    new[:-1] += lo * C * (beta + n - i)
    new[1:] += hi * C * (alpha + i)
    total = new.sum()
    if total <= 0.0:
        raise ValueError("degenerate weight vector")
    return new / total


def update_single(m: BetaMixture, s: int, A: float, B: float) -> BetaMixture:
    """Condition a Beta mixture on one contextual Bernoulli outcome."""
    _check_coefficients(A, B)
    if s not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    n = m.total
    dense = np.zeros(n + 1)
    dense[m.indices] = m.weights
    new = _step(dense, n, m.base.alpha, m.base.beta, int(s), float(A), float(B))
    return BetaMixture.from_weights(m.base, n + 1, np.arange(n + 2), new)


def posterior_general(s, A, B, prior: BetaParams = UNIFORM) -> BetaMixture:
    """Fold the single-test update over observations in order (O(t^2) total)."""
    s_arr, a_arr, b_arr = np.broadcast_arrays(
        np.asarray(s, dtype=np.int64).reshape(-1),
        np.asarray(A, dtype=np.float64),
        np.asarray(B, dtype=np.float64),
    )
    _check_coefficients(a_arr, b_arr)
    if s_arr.size and not np.all((s_arr == 0) | (s_arr == 1)):
        raise ValueError("outcomes must be 0 or 1")
    C = np.array([1.0])
    for k in range(s_arr.size):
        C = _step(C, k, prior.alpha, prior.beta, int(s_arr[k]), float(a_arr[k]), float(b_arr[k]))
    return BetaMixture.from_weights(prior, s_arr.size, np.arange(s_arr.size + 1), C)


def posterior_simplified(t: int, successes: int, B: float, prior: BetaParams = UNIFORM) -> BetaMixture:
    """Certainty-invariant posterior (constant A = 1 - B) in O(t).

    Components i = 0..successes of Beta(alpha + i, beta + t - i); consecutive
    log-weights differ by the closed-form ratio, accumulated in log space so
    the factorial-sized terms never overflow. B = 0 degenerates to the single
    static component i = successes.
    """
    t = int(t)
    S = int(successes)
    if t < 0 or S < 0 or S > t:
        raise ValueError(f"need 0 <= successes <= t, got successes={S}, t={t}")
    if not (0.0 <= B < 1.0):
        raise ValueError(f"need B in [0, 1), got {B}")
    a, b = prior.alpha, prior.beta
    if t == 0:
        return BetaMixture.from_prior(prior)
    if B < 1e-12 or S == 0:
        return BetaMixture.from_weights(prior, t, np.array([S]), np.array([1.0]))
    i = np.arange(S, dtype=np.float64)  # ratio steps i -> i+1, for i = 0..S-1
    log_ratio = np.log(S - i) + np.log(a + i) - np.log(B) - np.log1p(i) - np.log(b + t - 1.0 - i)
    logw = np.concatenate([[0.0], np.cumsum(log_ratio)])
    logw -= logsumexp(logw)
    return BetaMixture.from_weights(prior, t, np.arange(S + 1), np.exp(logw))


def neighbor_stats(data: DynamicDataset, xs, delta: float):
    """Per query row: neighbor count, success count, and mean A, B over neighbors."""
    hits = data.index.query_many(xs, delta)
    n = np.zeros(len(hits), dtype=np.int64)
    succ = np.zeros(len(hits), dtype=np.int64)
    a_bar = np.zeros(len(hits))
    b_bar = np.zeros(len(hits))
    for k, ids in enumerate(hits):
        if ids.size:
            n[k] = ids.size
            succ[k] = int(data.s[ids].sum())
            a_bar[k] = float(np.mean(data.A[ids]))
            b_bar[k] = float(np.mean(data.B[ids]))
    return n, succ, a_bar, b_bar


def mixture_from_counts(
    n: int, successes: int, a_bar: float, b_bar: float, prior: BetaParams = UNIFORM
) -> BetaMixture:
    """Posterior from neighborhood summary statistics; routes O(t) vs O(t^2)."""
    if n == 0:
        return BetaMixture.from_prior(prior)
    if abs(a_bar + b_bar - 1.0) <= CERTAINTY_ATOL and b_bar < 1.0:
        return posterior_simplified(n, successes, max(b_bar, 0.0), prior)
    s = np.concatenate([np.ones(successes, dtype=np.int64), np.zeros(n - successes, dtype=np.int64)])
    return posterior_general(s, a_bar, b_bar, prior)


def posterior_csbp(data: DynamicDataset, x, delta: float, prior: BetaParams = UNIFORM) -> BetaMixture:
    """Contextual posterior at x: neighbors within delta, coefficients averaged."""
    ids = data.index.query(x, delta)
    if ids.size == 0:
        return BetaMixture.from_prior(prior)
    successes = int(data.s[ids].sum())
    a_bar = float(np.mean(data.A[ids]))
    b_bar = float(np.mean(data.B[ids]))
    return mixture_from_counts(ids.size, successes, a_bar, b_bar, prior)


def posterior_csbp_scheduled(
    data: DynamicDataset,
    x,
    lipschitz: float = 1.0,
    prior: BetaParams = UNIFORM,
    shrink: float | None = None,
) -> BetaMixture:
    """:func:`posterior_csbp` with scheduled delta.

    The schedule treats ``(1 - mean B) * t`` as the effective sample count;
    pass ``shrink`` to override that default discount.
    """
    if len(data) == 0:
        return BetaMixture.from_prior(prior)
    if shrink is None:
        shrink = 1.0 - float(np.mean(data.B))
    delta = delta_schedule(len(data), data.dim, lipschitz, shrink)
    return posterior_csbp(data, x, delta, prior)


def exact_posterior_moments(s, A, B, prior: BetaParams = UNIFORM) -> tuple[float, float]:
    """First and second posterior moments by adaptive quadrature on [0, 1].

    Integrates ``prior(th) * prod_k (A_k th + B_k)^{s_k} (1 - A_k th - B_k)^{1-s_k}``
    directly (in log space), independent of every mixture recursion above; this
    is the oracle those recursions are tested against. Intended for sequences
    up to a few hundred observations.

    Raises ``ValueError("impossible observation sequence")`` when the
    likelihood vanishes identically on [0, 1].
    """
    s_arr, a_arr, b_arr = np.broadcast_arrays(
        np.asarray(s, dtype=np.float64).reshape(-1),
        np.asarray(A, dtype=np.float64),
        np.asarray(B, dtype=np.float64),
    )
    _check_coefficients(a_arr, b_arr)
    a0, b0 = prior.alpha, prior.beta

    def log_density(th: float) -> float:
        if th <= 0.0 or th >= 1.0:
            return -np.inf
        v = (a0 - 1.0) * np.log(th) + (b0 - 1.0) * np.log1p(-th)
        p = a_arr * th + b_arr
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(s_arr == 1.0, np.log(np.maximum(p, 0.0)), np.log(np.maximum(1.0 - p, 0.0)))
        return v + terms.sum()

    # Shift by the (grid-located) maximum so exp() cannot underflow under quad.
    grid = np.linspace(0.0, 1.0, 4097)[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = (a0 - 1.0) * np.log(grid) + (b0 - 1.0) * np.log1p(-grid)
        for k in range(s_arr.size):
            p = a_arr[k] * grid + b_arr[k]
            lk = np.log(np.maximum(p, 0.0)) if s_arr[k] == 1.0 else np.log(np.maximum(1.0 - p, 0.0))
            logv = logv + lk
    shift = float(np.max(logv))
    if not np.isfinite(shift):
        raise ValueError("impossible observation sequence")

    def f(th: float, power: int) -> float:
        v = log_density(th) - shift
        return 0.0 if v == -np.inf else th**power * np.exp(v)

    kw = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
    z = quad(f, 0.0, 1.0, args=(0,), **kw)[0]
    if z <= 0.0:
        raise ValueError("impossible observation sequence")
    m1 = quad(f, 0.0, 1.0, args=(1,), **kw)[0] / z
    m2 = quad(f, 0.0, 1.0, args=(2,), **kw)[0] / z
    return m1, m2


def flip_dataset(data: DynamicDataset) -> DynamicDataset:
    """Swap success and failure: outcomes 1-s, coefficients (A, 1-A-B).

    Under the flipped data the inferred function is 1 - pi. Use this when the
    context can only lower success probabilities (e.g. a multiplicative
    penalty A*pi with B = 0); flipping restores A' + B' = 1 - B, and with
    B = 0 the certainty-invariant fast path applies. Reflect the resulting
    mixture (or report 1 - mean) to get back to pi.
    """
    return DynamicDataset.build(data.x, 1 - data.s, data.A, 1.0 - data.A - data.B)


def posterior_csbp_flipped(
    data: DynamicDataset, x, delta: float, prior: BetaParams = UNIFORM
) -> BetaMixture:
    """Posterior for pi from failure-oriented data, via the flip transform.

    ``prior`` is the prior on pi itself; it is mirrored for the internal
    1 - pi inference and the result is reflected back.
    """
    mirrored = BetaParams(prior.beta, prior.alpha)
    return posterior_csbp(flip_dataset(data), x, delta, mirrored).reflect()
