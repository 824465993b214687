"""Targets, samplers, sweeps, and the fatigue case study."""

import numpy as np
import pytest

from smoothbeta.betamix import BetaParams
from smoothbeta.harness import (
    ErrorCurve,
    FatigueChainConfig,
    SYNTH_1D_LIPSCHITZ,
    SYNTH_2D_LIPSCHITZ,
    TargetFunction,
    bench_runtime,
    fatigue_beliefs,
    fit_loglog_slope,
    l2_error_at,
    query_grid,
    rehab_simulation,
    run_classification,
    run_convergence,
    sample_dynamic,
    sample_static,
    synth_1d,
    synth_2d,
)


class TestSynth1d:
    def test_boundary_and_center_values(self):
        f = synth_1d()
        assert f([0.0])[0] == pytest.approx(0.2, abs=1e-12)
        assert f([1.0])[0] == pytest.approx(0.2, abs=1e-12)
        # 0.2 + pdf(0.5; 7,3) / 8 + pdf(0.5; 3,7) / 6 with both pdfs = 252/256
        assert f([0.5])[0] == pytest.approx(0.487109375, abs=1e-12)

    def test_range_on_dense_grid(self):
        f = synth_1d()
        vals = f(np.linspace(0, 1, 10_000).reshape(-1, 1))
        assert vals.min() >= 0.0 and vals.max() <= 1.0
        assert vals.max() > 0.6  # humps actually rise above the pedestal

    def test_lipschitz_hint_matches_finite_differences(self):
        f = synth_1d()
        x = np.linspace(0, 1, 200_001).reshape(-1, 1)
        v = f(x)
        slope = np.max(np.abs(np.diff(v))) / (x[1, 0] - x[0, 0])
        assert SYNTH_1D_LIPSCHITZ == pytest.approx(slope, rel=1e-3)


class TestSynth2d:
    def test_peak_is_clipped_to_one(self):
        f = synth_2d()
        assert f([[0.75, 0.75]])[0] == 1.0

    def test_far_corner_values(self):
        f = synth_2d()
        # nearest bump to (0,1) is 0.2225 squared-distance away: exp(-4.45)
        assert f([[0.0, 1.0]])[0] == pytest.approx(np.exp(-0.2225 / 0.05), abs=1e-4)
        assert f([[0.0, 1.0]])[0] < 0.02
        assert f([[0.0, 0.0]])[0] < 0.001

    def test_clipped_on_grid(self):
        f = synth_2d()
        vals = f(query_grid(2, 100))
        assert vals.min() >= 0.0 and vals.max() <= 1.0

    def test_lipschitz_hint_matches_finite_differences(self):
        f = synth_2d()
        g = np.linspace(0, 1, 1501)
        xx, yy = np.meshgrid(g, g, indexing="ij")
        vals = f(np.stack([xx.ravel(), yy.ravel()], axis=-1)).reshape(1501, 1501)
        h = g[1] - g[0]
        l1 = np.abs(np.gradient(vals, h, axis=0)) + np.abs(np.gradient(vals, h, axis=1))
        assert SYNTH_2D_LIPSCHITZ == pytest.approx(l1.max(), rel=5e-3)


class TestSamplers:
    def test_empty(self):
        assert len(sample_static(synth_1d(), 0, 1)) == 0
        assert len(sample_dynamic(synth_1d(), 0, 1)) == 0

    def test_degenerate_certain_function(self):
        ones = TargetFunction(1, lambda p: np.ones(len(p)))
        data = sample_static(ones, 500, 2)
        assert data.s.sum() == 500

    def test_success_rate_concentrates(self):
        half = TargetFunction(1, lambda p: np.full(len(p), 0.5))
        data = sample_static(half, 100_000, 3)
        assert abs(data.s.mean() - 0.5) < 0.01

    def test_reproducible(self):
        a = sample_static(synth_1d(), 50, 77)
        b = sample_static(synth_1d(), 50, 77)
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.s, b.s)

    def test_dynamic_zero_lift_matches_static_draws(self):
        f = synth_1d()
        stat = sample_static(f, 200, 5)
        dyn = sample_dynamic(f, 200, 5, b_sampler=0.0)
        np.testing.assert_array_equal(stat.x, dyn.x)
        np.testing.assert_array_equal(stat.s, dyn.s)
        assert np.all(dyn.A == 1.0) and np.all(dyn.B == 0.0)

    def test_full_lift_always_succeeds(self):
        zero = TargetFunction(1, lambda p: np.zeros(len(p)))
        data = sample_dynamic(zero, 300, 9, b_sampler=1.0)
        assert data.s.sum() == 300

    def test_uniform_lift_rate_on_zero_function(self):
        zero = TargetFunction(1, lambda p: np.zeros(len(p)))
        data = sample_dynamic(zero, 100_000, 11)
        assert abs(data.s.mean() - 0.5) < 0.01

    def test_noise_keeps_records_clean(self):
        f = synth_1d()
        data = sample_dynamic(f, 1000, 13, noise_sd=0.1)
        np.testing.assert_allclose(data.A + data.B, 1.0, atol=1e-12)
        assert data.B.min() >= 0.0 and data.B.max() <= 1.0


class TestErrorMetric:
    def test_prior_against_half(self):
        assert l2_error_at(0.5, 1 / 3, 0.5) == pytest.approx(1 / 12, abs=1e-12)

    def test_concentrated_posterior(self):
        p = BetaParams(1e6, 1e6)
        assert l2_error_at(p.mean, p.moment2, 0.5) == pytest.approx(0.0, abs=1e-6)

    def test_mixture_example(self):
        assert l2_error_at(0.375, 0.2, 0.4) == pytest.approx(0.06, abs=1e-12)


class TestSlopeFit:
    def test_power_law(self):
        t = np.array([10, 100, 1000])
        curve = ErrorCurve(t, t**(-2 / 3.0), np.zeros(3), np.zeros(3), 1, 0)
        assert fit_loglog_slope(curve) == pytest.approx(-2 / 3, abs=1e-12)

    def test_constant(self):
        t = np.array([10, 100, 1000])
        curve = ErrorCurve(t, np.full(3, 0.25), np.zeros(3), np.zeros(3), 1, 0)
        assert fit_loglog_slope(curve) == pytest.approx(0.0, abs=1e-12)

    def test_inverse(self):
        t = np.array([10, 100, 1000, 10000])
        curve = ErrorCurve(t, 4.0 / t, np.zeros(4), np.zeros(4), 1, 0)
        assert fit_loglog_slope(curve) == pytest.approx(-1.0, abs=1e-12)

    def test_tail_restriction(self):
        t = np.array([10, 100, 1000, 10000])
        e = np.array([1.0, 1.0, 1.0, 0.1])
        curve = ErrorCurve(t, e, np.zeros(4), np.zeros(4), 1, 0)
        assert fit_loglog_slope(curve, tail=2) == pytest.approx(-1.0, abs=1e-12)

    def test_rejects_nonpositive_errors(self):
        curve = ErrorCurve(np.array([10, 100, 1000]), np.array([1.0, 0.0, 0.1]), np.zeros(3), np.zeros(3), 1, 0)
        with pytest.raises(ValueError):
            fit_loglog_slope(curve)

    def test_requires_three_points(self):
        curve = ErrorCurve(np.array([10, 100]), np.array([1.0, 0.5]), np.zeros(2), np.zeros(2), 1, 0)
        with pytest.raises(ValueError):
            fit_loglog_slope(curve)


class TestRunConvergence:
    def test_smoke(self):
        curve = run_convergence(synth_1d(), [10], reps=1, query_grid_size=11, seed=1)
        assert curve.t.tolist() == [10]
        assert 0.0 <= curve.mean_l2[0] <= 1.0

    def test_reproducible(self):
        kw = dict(reps=2, query_grid_size=21, seed=42, measure_runtime=False)
        c1 = run_convergence(synth_1d(), [20, 50], **kw)
        c2 = run_convergence(synth_1d(), [20, 50], **kw)
        np.testing.assert_array_equal(c1.mean_l2, c2.mean_l2)
        np.testing.assert_array_equal(c1.std_l2, c2.std_l2)

    def test_dynamic_smoke(self):
        curve = run_convergence(synth_1d(), [30], setting="dynamic", reps=1, query_grid_size=11, seed=2)
        assert 0.0 <= curve.mean_l2[0] <= 1.0

    def test_fixed_mode_requires_delta(self):
        with pytest.raises(ValueError):
            run_convergence(synth_1d(), [10], delta_mode="fixed", reps=1)

    def test_increasing_grid_required(self):
        with pytest.raises(ValueError):
            run_convergence(synth_1d(), [100, 10], reps=1)


class TestRunClassification:
    def test_shapes_and_range(self):
        excess = run_classification(synth_1d(), [50, 100], reps=2, query_grid_size=21, seed=3)
        assert excess.shape == (2,)
        assert np.all(excess >= -1e-12) and np.all(excess <= 1.0)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            run_classification(synth_1d(), [50], prior_mode="bogus")


class TestFatigueChain:
    def test_first_exercise_is_rested(self):
        beliefs = fatigue_beliefs(FatigueChainConfig())
        np.testing.assert_allclose(beliefs[0], [1, 0, 0, 0, 0, 0], atol=0)

    def test_one_and_two_steps(self):
        beliefs = fatigue_beliefs(FatigueChainConfig())
        np.testing.assert_allclose(beliefs[1], [0.9, 0.1, 0, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(beliefs[2], [0.81, 0.18, 0.01, 0, 0, 0], atol=1e-15)

    def test_rows_are_distributions_and_fatigue_accumulates(self):
        beliefs = fatigue_beliefs(FatigueChainConfig())
        np.testing.assert_allclose(beliefs.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(beliefs >= 0.0)
        # mass on states >= z never decreases with the exercise number
        tail = beliefs[:, ::-1].cumsum(axis=1)[:, ::-1]
        assert np.all(np.diff(tail, axis=0) >= -1e-12)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            FatigueChainConfig(b_levels=(0.5, 0.4))
        with pytest.raises(ValueError):
            FatigueChainConfig(b_levels=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6))
        with pytest.raises(ValueError):
            FatigueChainConfig(p_step=0.0)


class TestRehabSimulation:
    def test_single_exercise_has_rested_lift(self):
        cfg = FatigueChainConfig(sessions=1, exercises=1)
        report = rehab_simulation(cfg, seed=0, t_eval=[1], query_grid_size=11)
        assert len(report.dataset) == 1
        assert report.dataset.B[0] == pytest.approx(0.5, abs=1e-15)
        np.testing.assert_allclose(report.dataset.A + report.dataset.B, 1.0, atol=1e-12)

    def test_default_config_produces_800_experiments(self):
        report = rehab_simulation(FatigueChainConfig(), seed=1, t_eval=[80, 800], query_grid_size=21)
        assert len(report.dataset) == 800
        assert report.error_t.tolist() == [80, 800]
        assert np.all(report.error_l2 >= 0.0)
        np.testing.assert_allclose(report.rested_mean, 0.5 * report.base_mean + 0.5, atol=1e-14)
        np.testing.assert_allclose(report.rested_true, 0.5 * report.base_true + 0.5, atol=1e-14)

    def test_rejects_bad_t_eval(self):
        with pytest.raises(ValueError):
            rehab_simulation(FatigueChainConfig(), t_eval=[100, 10_000])


class TestBenchRuntime:
    def test_rows_and_positivity(self):
        rows = bench_runtime(synth_1d(), [200, 400], n_queries=20, seed=4)
        assert [t for t, _ in rows] == [200, 400]
        assert all(ms > 0 for _, ms in rows)
