"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``. Every tolerance is pinned
here; sweeps use fixed seeds so the whole gate is deterministic (runtime
measurements excepted).
"""

import numpy as np
import pytest

from smoothbeta.betamix import BetaParams
from smoothbeta.dynamic import (
    DynamicDataset,
    exact_posterior_moments,
    posterior_csbp,
    posterior_general,
    posterior_simplified,
)
from smoothbeta.harness import (
    FatigueChainConfig,
    bench_runtime,
    fit_loglog_slope,
    rehab_simulation,
    run_classification,
    run_convergence,
    synth_1d,
    synth_2d,
)
from smoothbeta.neighbors import NeighborIndex
from smoothbeta.static import StaticDataset, posterior_static

SEED = 1729
T_GRID = [100, 316, 1000, 3162, 10_000, 31_623, 100_000]  # half-decades 1e2..1e5


def _report(num: int, name: str, ok: bool, details: str) -> None:
    print(f"\n[criterion {num:02d}] {name}: {'PASS' if ok else 'FAIL'} ({details})")
    assert ok, f"criterion {num} ({name}): {details}"


@pytest.fixture(scope="module")
def scheduled_1d_curve():
    return run_convergence(synth_1d(), T_GRID, reps=20, seed=SEED, measure_runtime=False)


def test_c01_static_1d_rate(scheduled_1d_curve):
    slope = fit_loglog_slope(scheduled_1d_curve)
    _report(1, "static 1D convergence rate", -0.82 <= slope <= -0.52, f"slope={slope:.3f}, window [-0.82, -0.52]")


def test_c02_static_2d_rate():
    curve = run_convergence(synth_2d(), T_GRID, reps=10, seed=SEED, measure_runtime=False)
    slope = fit_loglog_slope(curve)
    _report(2, "static 2D convergence rate", -0.65 <= slope <= -0.35, f"slope={slope:.3f}, window [-0.65, -0.35]")


def test_c03_dynamic_1d_rate():
    curve = run_convergence(
        synth_1d(), T_GRID, setting="dynamic", reps=20, seed=SEED, measure_runtime=False
    )
    slope = fit_loglog_slope(curve)
    _report(3, "dynamic 1D convergence rate", -0.82 <= slope <= -0.52, f"slope={slope:.3f}, window [-0.82, -0.52]")


def test_c04_oracle_equivalence():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(1, 51))
        b = rng.uniform(0, 1, size=k)
        a = rng.uniform(-b, 1 - b)
        s = (rng.uniform(size=k) < 0.5).astype(int)
        prior = BetaParams(*rng.uniform(0.5, 5, size=2))
        mix = posterior_general(s, a, b, prior)
        m1, m2 = exact_posterior_moments(s, a, b, prior)
        worst = max(worst, abs(mix.mean - m1), abs(mix.moment2 - m2))
    _report(4, "recursion matches quadrature oracle", worst <= 1e-8, f"worst |moment error|={worst:.2e} over 1000 sequences, tol 1e-8")


def test_c05_fast_path_equals_step_recursion():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(200):
        t = int(rng.integers(1, 301))
        S = int(rng.integers(0, t + 1))
        B = float(rng.uniform(0, 0.95))
        prior = BetaParams(int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        fast = posterior_simplified(t, S, B, prior)
        s = np.concatenate([np.ones(S, int), np.zeros(t - S, int)])
        slow = posterior_general(s, 1.0 - B, B, prior)
        dense_fast = np.zeros(t + 1)
        dense_fast[fast.indices] = fast.weights
        dense_slow = np.zeros(t + 1)
        dense_slow[slow.indices] = slow.weights
        worst = max(worst, float(np.max(np.abs(dense_fast - dense_slow))))
    _report(5, "closed-form weights equal step recursion", worst <= 1e-10, f"worst |weight diff|={worst:.2e} over 200 cases, tol 1e-10")


def test_c06_static_reduction_is_exact():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(100):
        t = int(rng.integers(1, 200))
        d = int(rng.integers(1, 3))
        x = rng.uniform(0, 1, size=(t, d))
        s = (rng.uniform(size=t) < rng.uniform()).astype(int)
        stat = StaticDataset.build(x, s)
        dyn = DynamicDataset.build(x, s, np.ones(t), np.zeros(t))
        q = rng.uniform(0, 1, size=d)
        delta = float(rng.uniform(0.05, 0.5))
        mix = posterior_csbp(dyn, q, delta)
        post = posterior_static(stat, q, delta)
        worst = max(worst, abs(mix.mean - post.mean), abs(mix.moment2 - post.moment2))
    _report(6, "unlifted contextual posterior equals plain posterior", worst == 0.0, f"worst |moment diff|={worst:.2e} over 100 datasets, exact match required")


def test_c07_kernel_width_ablation(scheduled_1d_curve):
    d1 = 50.0 ** (-1.0 / 3.0)
    d2 = 500_000.0 ** (-1.0 / 3.0)
    wide = run_convergence(
        synth_1d(), T_GRID, reps=20, delta_mode="fixed", fixed_delta=d1, seed=SEED, measure_runtime=False
    )
    narrow = run_convergence(
        synth_1d(), T_GRID, reps=20, delta_mode="fixed", fixed_delta=d2, seed=SEED, measure_runtime=False
    )
    wide_tail = fit_loglog_slope(wide, tail=3)
    sched_tail = fit_loglog_slope(scheduled_1d_curve, tail=3)
    i1000 = T_GRID.index(1000)
    narrow_err = narrow.mean_l2[i1000]
    sched_err = scheduled_1d_curve.mean_l2[i1000]
    ok = wide_tail > -0.2 and sched_tail < -0.4 and narrow_err > sched_err
    _report(
        7,
        "fixed kernel widths saturate or lag",
        ok,
        f"wide tail slope={wide_tail:.3f} (> -0.2), scheduled tail slope={sched_tail:.3f} (< -0.4), "
        f"narrow err@1e3={narrow_err:.2e} > scheduled err@1e3={sched_err:.2e}",
    )


def test_c08_per_query_runtime_subquadratic():
    rows = bench_runtime(synth_1d(), [1_000, 10_000, 100_000, 1_000_000], n_queries=200, seed=SEED)
    t, ms = zip(*rows)
    slope = float(np.polyfit(np.log(t), np.log(ms), 1)[0])
    _report(8, "per-query time grows at most linearly", slope <= 1.2, f"log-log time slope={slope:.3f} (<= 1.2); per-query ms={['%.4f' % m for m in ms]}")


def test_c09_classification_excess_risk():
    t_grid = [100, 1000, 10_000]
    uniform = run_classification(synth_1d(), t_grid, reps=20, prior_mode="uniform", seed=SEED)
    monotone = bool(np.all(np.diff(uniform) < 0.0))
    small_at_end = uniform[-1] < 0.05
    none100 = run_classification(synth_1d(), [100], reps=20, prior_mode="none", seed=SEED)[0]
    info100 = run_classification(synth_1d(), [100], reps=20, prior_mode="informative", v_frac=0.25, seed=SEED)[0]
    informed_better = info100 < none100
    ok = monotone and small_at_end and informed_better
    _report(
        9,
        "excess risk shrinks and informed priors help early",
        ok,
        f"excess={[f'{e:.4f}' for e in uniform]} (monotone={monotone}, final<0.05={small_at_end}); "
        f"t=100 informative {info100:.4f} < no-prior {none100:.4f} = {informed_better}",
    )


def test_c10_rehab_case_study():
    cfg = FatigueChainConfig()
    wins = 0
    pairs = []
    for seed in range(20):
        report = rehab_simulation(cfg, seed=seed, t_eval=[80, 800], query_grid_size=101)
        e80, e800 = report.error_l2
        pairs.append((e80, e800))
        wins += int(e800 < e80)
    _report(10, "rested-state error improves with data", wins >= 18, f"error(800) < error(80) in {wins}/20 seeds (need >= 18); example pair={pairs[0]}")


def test_c11_invariant_suites():
    rng = np.random.default_rng(SEED + 3)
    checks = []

    # mixture normalization and moment bounds, 1000 random posteriors
    worst_norm = 0.0
    worst_bound = 0.0
    for _ in range(1000):
        k = int(rng.integers(0, 16))
        b = rng.uniform(0, 1, size=k)
        a = rng.uniform(-b, 1 - b)
        s = (rng.uniform(size=k) < 0.5).astype(int)
        mix = posterior_general(s, a, b, BetaParams(*rng.uniform(0.5, 5, size=2)))
        worst_norm = max(worst_norm, abs(float(mix.weights.sum()) - 1.0))
        assert np.all(mix.weights >= 0.0)
        worst_bound = max(worst_bound, mix.mean**2 - mix.moment2)
        assert 0.0 <= mix.mean <= 1.0
    checks.append(("normalization", worst_norm <= 1e-12, f"{worst_norm:.1e}"))
    checks.append(("moment bound", worst_bound <= 1e-12, f"{worst_bound:.1e}"))

    # permutation invariance of the step recursion, 1000 random pairs
    worst_perm = 0.0
    for _ in range(1000):
        k = int(rng.integers(1, 13))
        b = rng.uniform(0, 1, size=k)
        a = rng.uniform(-b, 1 - b)
        s = (rng.uniform(size=k) < 0.5).astype(int)
        perm = rng.permutation(k)
        m1 = posterior_general(s, a, b)
        m2 = posterior_general(s[perm], a[perm], b[perm])
        worst_perm = max(worst_perm, abs(m1.mean - m2.mean), abs(m1.moment2 - m2.moment2))
    checks.append(("permutation invariance", worst_perm <= 1e-10, f"{worst_perm:.1e}"))

    # pseudo-count conservation, 1000 random static posteriors
    worst_cons = 0.0
    for _ in range(1000):
        t = int(rng.integers(0, 60))
        x = rng.uniform(0, 1, size=(t, 1))
        s = (rng.uniform(size=t) < 0.5).astype(int)
        data = StaticDataset.build(x, s)
        prior = BetaParams(*rng.uniform(0.1, 10, size=2))
        q = rng.uniform(0, 1, size=1)
        delta = float(rng.uniform(0, 1))
        post = posterior_static(data, q, delta, prior)
        n = data.index.query(q, delta).size
        expected = prior.alpha + prior.beta + n
        worst_cons = max(worst_cons, abs((post.alpha + post.beta) - expected) / expected)
    checks.append(("pseudo-count conservation", worst_cons <= 1e-12, f"rel {worst_cons:.1e}"))

    # neighbor queries equal the brute-force scan, 1000 random (query, delta)
    mismatches = 0
    cases = 0
    for d in (1, 2, 3):
        pts = rng.uniform(0, 1, size=(10_000, d))
        idx = NeighborIndex(pts)
        for _ in range(334):
            q = rng.uniform(0, 1, size=d)
            delta = float(rng.uniform(0.005, 0.7))
            got = idx.query(q, delta)
            ref = np.flatnonzero(np.max(np.abs(pts - q), axis=1) <= delta)
            mismatches += int(got.tolist() != ref.tolist())
            cases += 1
    checks.append((f"neighbor equality ({cases} cases)", mismatches == 0, f"{mismatches} mismatches"))

    ok = all(c[1] for c in checks)
    details = "; ".join(f"{name}: {'ok' if good else 'FAIL'} ({info})" for name, good, info in checks)
    _report(11, "property suites", ok, details)
