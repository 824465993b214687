"""Synthetic targets, samplers, convergence sweeps, and case studies.

Everything here is deterministic given (seed, configuration). Replication
streams are derived as ``numpy.random.default_rng([seed, rep])`` and consumed
in t-grid order, so curves are reproducible bit-for-bit regardless of how the
loops are arranged or parallelized later.

The error metric is the expected squared deviation of the posterior from the
true probability, ``E[(pi~ - pi)^2] = m2 - 2 pi m1 + pi^2`` (posterior
variance plus squared bias), averaged over a uniform query grid and over
replications.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import beta as beta_dist

from .betamix import UNIFORM, BetaParams
from .classification import informative_prior_arrays
from .dynamic import DynamicDataset, mixture_from_counts, neighbor_stats
from .neighbors import as_points, delta_schedule
from .static import StaticDataset, count_neighbors

DEFAULT_SEED = 1729

# Numerically measured sup-norms of the target gradients (l1 norm of the
# gradient, the modulus matching l-inf neighborhoods). Frozen here; the test
# suite re-derives them by finite differences.
SYNTH_1D_LIPSCHITZ = 3.0236
SYNTH_2D_LIPSCHITZ = 5.5212


@dataclass(frozen=True)
class TargetFunction:
    """A deterministic probability function on [0,1]^dim, output clipped to [0,1]."""

    dim: int
    fn: Callable[[np.ndarray], np.ndarray]
    lipschitz_hint: float | None = None

    def __call__(self, pts) -> np.ndarray:
        p = as_points(np.atleast_1d(np.asarray(pts, dtype=np.float64)), self.dim)
        return np.clip(self.fn(p), 0.0, 1.0)


def synth_1d() -> TargetFunction:
    """Two Beta-pdf humps on a 0.2 pedestal; values in [0.2, ~0.75]."""

    def fn(pts):
        x = pts[:, 0]
        return 0.2 + beta_dist.pdf(x, 7, 3) / 8.0 + beta_dist.pdf(x, 3, 7) / 6.0

    return TargetFunction(1, fn, SYNTH_1D_LIPSCHITZ)


def synth_2d() -> TargetFunction:
    """Three radial bumps exp(-|x - mu|^2 / (2 * 0.025)), unnormalized, clipped."""
    centers = np.array([[0.75, 0.75], [0.6, 0.3], [0.25, 0.6]])

    def fn(pts):
        out = np.zeros(len(pts))
        for c in centers:
            out += np.exp(-((pts - c) ** 2).sum(axis=1) / (2.0 * 0.025))
        return out

    return TargetFunction(2, fn, SYNTH_2D_LIPSCHITZ)


def query_grid(dim: int, size: int | None = None) -> np.ndarray:
    """Uniform evaluation grid: ``size`` points in 1D, size x size in 2D."""
    if size is None:
        size = 101 if dim == 1 else 51
    g = np.linspace(0.0, 1.0, size)
    if dim == 1:
        return g.reshape(-1, 1)
    if dim == 2:
        xx, yy = np.meshgrid(g, g, indexing="ij")
        return np.stack([xx.ravel(), yy.ravel()], axis=-1)
    raise ValueError(f"query grids are provided for dim 1 and 2, got {dim}")


def sample_static(f: TargetFunction, t: int, seed) -> StaticDataset:
    """t experiments at uniform locations with outcomes ~ Bernoulli(f(x))."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=(t, f.dim))
    s = (rng.uniform(0.0, 1.0, size=t) < f(x)).astype(np.int64)
    return StaticDataset.build(x, s)


def sample_dynamic(
    f: TargetFunction,
    t: int,
    seed,
    b_sampler=None,
    noise_sd: float = 0.0,
) -> DynamicDataset:
    """Contextual experiments with lift B and coefficients (A, B) = (1 - B, B).

    ``b_sampler`` is a constant in [0,1], a callable ``(rng, size) -> array``,
    or None for Uniform[0,1]. The recorded coefficients are the clean (A, B);
    the Bernoulli parameter uses B + eps with eps ~ Uniform(-a, a),
    a = min(noise_sd * sqrt(3), B, 1 - B) per draw, so the realized lift stays
    in [0,1] while eps keeps zero mean.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=(t, f.dim))
    if b_sampler is None:
        b = rng.uniform(0.0, 1.0, size=t)
    elif callable(b_sampler):
        b = np.asarray(b_sampler(rng, t), dtype=np.float64).reshape(-1)
    else:
        b = np.full(t, float(b_sampler))
    if b.size != t or (t and (b.min() < 0.0 or b.max() > 1.0)):
        raise ValueError("sampled B values must lie in [0, 1]")
    if noise_sd < 0.0:
        raise ValueError("noise_sd must be nonnegative")
    if noise_sd > 0.0 and t:
        half = np.minimum(noise_sd * np.sqrt(3.0), np.minimum(b, 1.0 - b))
        eps = rng.uniform(-1.0, 1.0, size=t) * half
    else:
        eps = np.zeros(t)
    p = (1.0 - (b + eps)) * f(x) + (b + eps)
    s = (rng.uniform(0.0, 1.0, size=t) < p).astype(np.int64)
    return DynamicDataset.build(x, s, 1.0 - b, b)


def l2_error_at(m1, m2, p_true):
    """Expected squared error of a posterior with moments (m1, m2) against p_true."""
    return np.asarray(m2) - 2.0 * np.asarray(p_true) * np.asarray(m1) + np.asarray(p_true) ** 2


def static_moments_grid(
    data: StaticDataset, qs, delta: float, prior: BetaParams = UNIFORM
) -> tuple[np.ndarray, np.ndarray]:
    """Posterior (m1, m2) at each query row; zero-neighbor rows get the prior."""
    n, succ = count_neighbors(data, qs, delta)
    a = prior.alpha + succ
    tot = prior.alpha + prior.beta + n
    return a / tot, a * (a + 1.0) / (tot * (tot + 1.0))


def dynamic_moments_grid(
    data: DynamicDataset, qs, delta: float, prior: BetaParams = UNIFORM
) -> tuple[np.ndarray, np.ndarray]:
    """Mixture posterior (m1, m2) at each query row."""
    n, succ, a_bar, b_bar = neighbor_stats(data, qs, delta)
    m1 = np.empty(len(n))
    m2 = np.empty(len(n))
    for k in range(len(n)):
        mix = mixture_from_counts(int(n[k]), int(succ[k]), a_bar[k], b_bar[k], prior)
        m1[k], m2[k] = mix.mean, mix.moment2
    return m1, m2


@dataclass(frozen=True, eq=False)
class ErrorCurve:
    """Convergence curve: per sample count, mean/std of the grid-averaged error."""

    t: np.ndarray
    mean_l2: np.ndarray
    std_l2: np.ndarray
    runtime_ms: np.ndarray
    reps: int
    seed: int

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.int64)
        if t.size and np.any(np.diff(t) <= 0):
            raise ValueError("sample counts must be strictly increasing")
        if np.any(np.asarray(self.mean_l2) < 0.0):
            raise ValueError("mean errors must be nonnegative")
        object.__setattr__(self, "t", t)

    def rows(self):
        return list(zip(self.t.tolist(), self.mean_l2.tolist(), self.std_l2.tolist(), self.runtime_ms.tolist()))


def _resolve_lipschitz(f: TargetFunction, lipschitz: float | None) -> float:
    if lipschitz is not None:
        return float(lipschitz)
    return float(f.lipschitz_hint) if f.lipschitz_hint else 1.0


def run_convergence(
    f: TargetFunction,
    t_grid,
    *,
    setting: str = "static",
    reps: int = 20,
    query_grid_size: int | None = None,
    delta_mode: str = "scheduled",
    fixed_delta: float | None = None,
    lipschitz: float | None = None,
    prior: BetaParams = UNIFORM,
    b_sampler=None,
    noise_sd: float = 0.0,
    seed: int = DEFAULT_SEED,
    measure_runtime: bool = True,
) -> ErrorCurve:
    """Grid-averaged posterior error versus sample count.

    For each t in ``t_grid`` and each replication: draw a fresh dataset,
    evaluate the posterior on the query grid, and average the expected squared
    error. ``delta_mode`` is "scheduled" (width from :func:`delta_schedule`,
    Lipschitz knob defaulting to the target's hint) or "fixed"
    (``fixed_delta`` used verbatim at every t, the ablation mode). Recorded
    runtime is per-query inference only; dataset generation and index build
    are excluded.
    """
    t_grid = [int(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly increasing")
    if setting not in ("static", "dynamic"):
        raise ValueError(f"unknown setting: {setting!r}")
    if delta_mode == "fixed":
        if fixed_delta is None or not (0.0 < fixed_delta <= 1.0):
            raise ValueError("fixed delta_mode requires fixed_delta in (0, 1]")
    elif delta_mode != "scheduled":
        raise ValueError(f"unknown delta_mode: {delta_mode!r}")

    lip = _resolve_lipschitz(f, lipschitz)
    qs = query_grid(f.dim, query_grid_size)
    p_true = f(qs)
    streams = [np.random.default_rng([seed, rep]) for rep in range(reps)]

    mean_l2 = np.empty(len(t_grid))
    std_l2 = np.empty(len(t_grid))
    runtime_ms = np.full(len(t_grid), np.nan)
    for ti, t in enumerate(t_grid):
        errs = np.empty(reps)
        per_query = np.empty(reps)
        for rep in range(reps):
            rng = streams[rep]
            if setting == "static":
                data = sample_static(f, t, rng)
                delta = fixed_delta if delta_mode == "fixed" else delta_schedule(t, f.dim, lip)
                tic = time.perf_counter()
                m1, m2 = static_moments_grid(data, qs, delta, prior)
                toc = time.perf_counter()
            else:
                data = sample_dynamic(f, t, rng, b_sampler=b_sampler, noise_sd=noise_sd)
                if delta_mode == "fixed":
                    delta = fixed_delta
                else:
                    shrink = 1.0 - float(np.mean(data.B)) if t else 1.0
                    delta = delta_schedule(t, f.dim, lip, max(shrink, 1.0 / max(t, 1)))
                tic = time.perf_counter()
                m1, m2 = dynamic_moments_grid(data, qs, delta, prior)
                toc = time.perf_counter()
            errs[rep] = float(np.mean(l2_error_at(m1, m2, p_true)))
            per_query[rep] = (toc - tic) / len(qs) * 1e3
        mean_l2[ti] = errs.mean()
        std_l2[ti] = errs.std()
        if measure_runtime:
            runtime_ms[ti] = per_query.mean()
    return ErrorCurve(np.array(t_grid), mean_l2, std_l2, runtime_ms, reps, seed)


def fit_loglog_slope(curve, tail: int | None = None) -> float:
    """Least-squares slope of log(error) against log(t).

    ``tail`` restricts the fit to the last that many points ("final-segment"
    slope used by the kernel-width ablation). Accepts an :class:`ErrorCurve`
    or a pair of arrays (t, errors).
    """
    if isinstance(curve, ErrorCurve):
        t, e = curve.t, curve.mean_l2
    else:
        t, e = (np.asarray(v, dtype=np.float64) for v in curve)
    if tail is not None:
        if tail < 2:
            raise ValueError("tail must cover at least 2 points")
        t, e = t[-tail:], e[-tail:]
    elif t.size < 3:
        raise ValueError("need at least 3 curve points for a slope fit")
    if np.any(e <= 0.0):
        raise ValueError("error values must be positive for a log-log fit")
    return float(np.polyfit(np.log(np.asarray(t, dtype=np.float64)), np.log(e), 1)[0])


def run_classification(
    f: TargetFunction,
    t_grid,
    *,
    reps: int = 20,
    prior_mode: str = "uniform",
    v_frac: float = 0.25,
    query_grid_size: int | None = None,
    lipschitz: float | None = None,
    seed: int = DEFAULT_SEED,
) -> np.ndarray:
    """Mean excess classification risk per t: grid-average of R(label) - min(p, 1-p).

    ``prior_mode``: "uniform" (Beta(1,1)), "none" (near-zero pseudo-counts,
    i.e. a plain neighborhood majority vote), or "informative" (prior mean
    matched to the true function, variance ``v_frac * m (1 - m)``). Datasets
    are shared across modes for a given seed, so modes compare pairwise.
    """
    t_grid = [int(t) for t in t_grid]
    lip = _resolve_lipschitz(f, lipschitz)
    qs = query_grid(f.dim, query_grid_size)
    p_true = f(qs)
    if prior_mode == "uniform":
        a0, b0 = np.ones_like(p_true), np.ones_like(p_true)
    elif prior_mode == "none":
        a0, b0 = np.full_like(p_true, 1e-9), np.full_like(p_true, 1e-9)
    elif prior_mode == "informative":
        a0, b0 = informative_prior_arrays(p_true, v_frac * p_true * (1.0 - p_true))
    else:
        raise ValueError(f"unknown prior_mode: {prior_mode!r}")
    r_star = np.minimum(p_true, 1.0 - p_true)

    streams = [np.random.default_rng([seed, rep]) for rep in range(reps)]
    excess = np.empty(len(t_grid))
    for ti, t in enumerate(t_grid):
        vals = np.empty(reps)
        for rep in range(reps):
            data = sample_static(f, t, streams[rep])
            delta = delta_schedule(t, f.dim, lip)
            n, succ = count_neighbors(data, qs, delta)
            mean = (a0 + succ) / (a0 + b0 + n)
            labels = mean >= 0.5
            r = np.where(labels, 1.0 - p_true, p_true)
            vals[rep] = float(np.mean(r - r_star))
        excess[ti] = vals.mean()
    return excess


def bench_runtime(
    f: TargetFunction | None = None,
    t_grid=(10_000, 100_000, 1_000_000),
    *,
    n_queries: int = 200,
    lipschitz: float | None = None,
    seed: int = DEFAULT_SEED,
) -> list[tuple[int, float]]:
    """Per-query posterior time (ms) versus dataset size, single-query calls.

    Index build and data generation are excluded; the timed operation is one
    neighborhood lookup plus the posterior update, which is what scales with t.
    """
    from .static import posterior_static

    if f is None:
        f = synth_1d()
    lip = _resolve_lipschitz(f, lipschitz)
    out = []
    for ti, t in enumerate(t_grid):
        t = int(t)
        rng = np.random.default_rng([seed, ti])
        data = sample_static(f, t, rng)
        delta = delta_schedule(t, f.dim, lip)
        queries = rng.uniform(0.0, 1.0, size=(n_queries, f.dim))
        posterior_static(data, queries[0], delta)  # warm the tree once
        tic = time.perf_counter()
        for q in queries:
            posterior_static(data, q, delta)
        toc = time.perf_counter()
        out.append((t, (toc - tic) / n_queries * 1e3))
    return out


@dataclass(frozen=True)
class FatigueChainConfig:
    """Markov fatigue chain for the rehabilitation case study.

    ``levels`` fatigue states above rested; after every exercise the subject
    moves up one state with probability ``p_step`` (absorbing at the top);
    each session restarts rested. ``b_levels[z]`` is the success-probability
    lift of state z acting on the base (most fatigued) function.
    """

    levels: int = 5
    p_step: float = 0.1
    sessions: int = 40
    exercises: int = 20
    b_levels: tuple = (0.5, 0.4, 0.3, 0.2, 0.1, 0.0)

    def __post_init__(self):
        if self.levels < 1 or self.sessions < 1 or self.exercises < 1:
            raise ValueError("levels, sessions, and exercises must be positive")
        if not 0.0 < self.p_step <= 1.0:
            raise ValueError("p_step must lie in (0, 1]")
        b = np.asarray(self.b_levels, dtype=np.float64)
        if b.size != self.levels + 1:
            raise ValueError(f"b_levels must have length levels + 1 = {self.levels + 1}")
        if b.min() < 0.0 or b.max() > 1.0 or np.any(np.diff(b) > 0.0):
            raise ValueError("b_levels must be nonincreasing values in [0, 1]")


def fatigue_beliefs(cfg: FatigueChainConfig) -> np.ndarray:
    """State distribution before each exercise of a session: (exercises, levels+1)."""
    z = cfg.levels
    out = np.zeros((cfg.exercises, z + 1))
    cur = np.zeros(z + 1)
    cur[0] = 1.0
    for u in range(cfg.exercises):
        out[u] = cur
        moved = cur[:z] * cfg.p_step
        nxt = cur.copy()
        nxt[:z] -= moved
        nxt[1:] += moved
        cur = nxt
    return out


@dataclass(frozen=True, eq=False)
class RehabReport:
    """Outputs of :func:`rehab_simulation` on a 1D difficulty grid."""

    x_grid: np.ndarray
    base_mean: np.ndarray
    base_var: np.ndarray
    base_true: np.ndarray
    rested_mean: np.ndarray
    rested_true: np.ndarray
    error_t: np.ndarray
    error_l2: np.ndarray
    dataset: DynamicDataset


def rehab_simulation(
    cfg: FatigueChainConfig,
    seed: int = DEFAULT_SEED,
    *,
    t_eval=(80, 200, 400, 800),
    query_grid_size: int = 101,
    prior: BetaParams = UNIFORM,
) -> RehabReport:
    """Simulate sessions of exercises under fatigue and recover the ability curves.

    The base success function (most fatigued state) is ``1 - x`` in the
    difficulty x. The subject's state is never observed; each exercise u uses
    the belief-weighted lift ``B~_u = sum_z P(state z at u) * b_levels[z]``,
    outcomes are drawn from ``(1 - B~_u)(1 - x) + B~_u``, and inference sees
    (A, B) = (1 - B~_u, B~_u), which satisfies A + B = 1.

    The report carries the posterior for the base curve, the reconstructed
    rested curve ``(1 - b0) * posterior + b0``, and the rested-state error at
    each prefix size in ``t_eval`` (entries in chronological order).
    """
    b_levels = np.asarray(cfg.b_levels, dtype=np.float64)
    b_tilde = fatigue_beliefs(cfg) @ b_levels  # per exercise within a session
    rng = np.random.default_rng(seed)
    H, U = cfg.sessions, cfg.exercises
    x = rng.uniform(0.0, 1.0, size=(H, U))
    p = (1.0 - b_tilde) * (1.0 - x) + b_tilde
    s = (rng.uniform(0.0, 1.0, size=(H, U)) < p).astype(np.int64)
    b = np.tile(b_tilde, (H, 1))
    data = DynamicDataset.build(x.ravel(), s.ravel(), 1.0 - b.ravel(), b.ravel())

    t_eval = np.asarray([int(t) for t in t_eval], dtype=np.int64)
    if t_eval.size == 0 or t_eval.max() > len(data) or t_eval.min() < 1:
        raise ValueError(f"t_eval entries must lie in [1, {len(data)}]")
    if np.any(np.diff(t_eval) <= 0):
        raise ValueError("t_eval must be strictly increasing")

    qs = query_grid(1, query_grid_size)
    base_true = 1.0 - qs[:, 0]
    b0 = b_levels[0]
    rested_true = (1.0 - b0) * base_true + b0

    def base_moments(t: int):
        prefix = DynamicDataset.build(data.x[:t], data.s[:t], data.A[:t], data.B[:t])
        shrink = 1.0 - float(np.mean(prefix.B))
        delta = delta_schedule(t, 1, 1.0, shrink)
        return dynamic_moments_grid(prefix, qs, delta, prior)

    errors = np.empty(t_eval.size)
    for k, t in enumerate(t_eval):
        m1, m2 = base_moments(int(t))
        errors[k] = float(np.mean((1.0 - b0) ** 2 * l2_error_at(m1, m2, base_true)))

    m1, m2 = base_moments(len(data))
    return RehabReport(
        x_grid=qs[:, 0],
        base_mean=m1,
        base_var=m2 - m1**2,
        base_true=base_true,
        rested_mean=(1.0 - b0) * m1 + b0,
        rested_true=rested_true,
        error_t=t_eval,
        error_l2=errors,
        dataset=data,
    )
