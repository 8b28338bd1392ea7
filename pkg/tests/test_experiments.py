"""Experiment orchestration: sweeps, probes, selftest, determinism."""

import dataclasses

import numpy as np
import pytest

from dmnls.evolution import SolverParams, solve_dmnls
from dmnls.experiments import (
    defect_scan,
    limit_study,
    selftest,
    stability_probe,
    strichartz_probe,
)
from dmnls.grid import Field2D, band_limited_field, gaussian_field, make_grid, mass, plane_wave
from dmnls.nonlinearity import gauss_legendre_01


@pytest.fixture(scope="module")
def small_params():
    return SolverParams(dt=2e-3, t_final=0.2, snapshot_stride=20)


class TestLimitStudy:
    def test_zero_data(self, grid_small, small_params):
        z = Field2D(grid_small, np.zeros((64, 64)))
        report = limit_study(z, [1.0, 0.5], small_params)
        for row in report.rows:
            assert row.error is None
            assert row.err_linf_l2 == 0.0
            assert row.err_l4 == 0.0

    def test_plane_wave_control(self, grid_small, small_params):
        pw = plane_wave(grid_small, (1, 0))
        report = limit_study(pw, [1.0, 0.5, 0.25], small_params)
        for row in report.rows:
            assert row.error is None
            assert row.err_linf_l2 <= 1e-8
        # scaling cross-check is exact for the equivariant discretization
        for value in report.manifest["cross_check_rel_linf_l2"].values():
            assert value <= 1e-12

    def test_rejects_bad_lambdas(self, grid_small, small_params):
        pw = plane_wave(grid_small, (1, 0))
        with pytest.raises(ValueError):
            limit_study(pw, [0.5, 1.0], small_params)
        with pytest.raises(ValueError):
            limit_study(pw, [2.0, 1.0], small_params)

    def test_gaussian_errors_decrease(self, small_params):
        g = make_grid(8 * np.pi, 64)
        phi = gaussian_field(g)
        report = limit_study(phi, [1.0, 0.5, 0.25], small_params)
        errs = [row.err_linf_l2 for row in report.rows]
        assert errs[0] > errs[1] > errs[2]
        assert "err_linf_l2_vs_lambda" in report.fitted_slopes


class TestDefectScan:
    def test_plane_wave_terms_vanish(self, grid_small, small_params):
        pw = plane_wave(grid_small, (1, 0))
        report = defect_scan(
            pw, [0.5, 0.25], 8.0, gauss_legendre_01(8), small_params
        )
        for row in report.rows:
            assert row.low_term <= 1e-10
            assert row.high_term <= 1e-10
            assert row.dm_high_term <= 1e-10

    def test_gaussian_slope_near_two(self, small_params):
        g = make_grid(8 * np.pi, 64)
        phi = gaussian_field(g)
        report = defect_scan(
            phi, [0.25, 0.125, 0.0625], 4.0, gauss_legendre_01(8), small_params
        )
        assert 1.8 <= report.fitted_slopes["low_term_vs_lambda"] <= 2.2

    def test_cutoff_tradeoff_is_monotone(self, small_params):
        # shrinking N moves weight from the low piece into the high pieces
        g = make_grid(8 * np.pi, 64)
        phi = gaussian_field(g)
        rule = gauss_legendre_01(8)
        reports = {
            N: defect_scan(phi, [0.5], N, rule, small_params) for N in (4.0, 2.0, 1.0)
        }
        lows = [reports[N].rows[0].low_term for N in (4.0, 2.0, 1.0)]
        highs = [reports[N].rows[0].high_term for N in (4.0, 2.0, 1.0)]
        assert lows[0] > lows[1] > lows[2]
        assert highs[0] < highs[1] < highs[2]


class TestStabilityProbe:
    def test_unnormalized_perturbation_rejected(self, grid_small, small_params):
        u0 = plane_wave(grid_small, (1, 0), amplitude=0.2)
        with pytest.raises(ValueError, match="normalized"):
            stability_probe(u0, u0, [0.1], small_params)

    def test_zero_baseline_distance_is_eta(self, grid_small, small_params, rng):
        z = Field2D(grid_small, np.zeros((64, 64)))
        pert = band_limited_field(grid_small, 3, rng, norm=1.0)
        eta = 0.05
        run = solve_dmnls(eta * pert, small_params)
        assert mass(run.snapshots[0]) == pytest.approx(eta, rel=1e-12)
        report = stability_probe(z, pert, [eta], small_params, K=4)
        assert report.rows[0].err_linf_l2 >= eta * (1 - 1e-6)

    def test_linear_response_slope(self, small_params, rng):
        g = make_grid(8 * np.pi, 64)
        u0 = gaussian_field(g, amplitude=0.25)
        pert = band_limited_field(g, 3, rng, norm=1.0)
        report = stability_probe(u0, pert, [1e-1, 1e-2, 1e-3], small_params, K=4)
        slope = report.fitted_slopes["distance_vs_eta"]
        assert 0.8 <= slope <= 1.2


class TestStrichartzProbe:
    def test_ratio_stats(self, grid_small):
        report = strichartz_probe(seed=1, count=3, grid=grid_small, time_points=9)
        stats = report.manifest["ratio_stats"]
        assert len(stats) == 3
        for entry in stats:
            assert 0 < entry["min"] <= entry["max"]
            assert entry["spread"] <= 3.0

    def test_deterministic_given_seed(self, grid_small):
        a = strichartz_probe(seed=9, count=2, grid=grid_small, time_points=9)
        b = strichartz_probe(seed=9, count=2, grid=grid_small, time_points=9)
        assert a.manifest["ratio_stats"] == b.manifest["ratio_stats"]


class TestSelftest:
    def test_green_by_default(self):
        result = selftest(n=64)
        assert result.passed, result.failures
        assert result.elapsed_sec < 60.0

    def test_broken_cutoff_reports_bernstein(self):
        def too_wide_and_loud(r):
            return np.where(r <= 4.0, 2.5, 0.0)

        result = selftest(n=64, cutoff_profile=too_wide_and_loud)
        assert any(f.startswith("bernstein") for f in result.failures)

    def test_perturbed_weights_report_plane_wave_identity(self):
        rule = gauss_legendre_01(8)
        weights = list(rule.weights)
        weights[0] += 1e-3
        object.__setattr__(rule, "weights", tuple(weights))
        result = selftest(n=64, rule=rule)
        assert any(f.startswith("plane_wave_identity") for f in result.failures)


class TestDeterminism:
    def test_identical_rows_given_identical_inputs(self, grid_small, small_params):
        pw = plane_wave(grid_small, (1, 0))
        a = limit_study(pw, [1.0, 0.5], small_params)
        b = limit_study(pw, [1.0, 0.5], small_params)
        for ra, rb in zip(a.rows, b.rows):
            da, db = dataclasses.asdict(ra), dataclasses.asdict(rb)
            da.pop("runtime_sec"), db.pop("runtime_sec")
            assert da == db
