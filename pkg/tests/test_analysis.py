"""Rescaling, space-time norms, shifted Duhamel gain, defect decomposition."""

import numpy as np
import pytest

from dmnls.analysis import (
    decomposition_fields,
    decomposition_terms,
    fit_loglog_slope,
    rescale,
    scattering_diagnostic,
    shifted_duhamel_ratio,
    spacetime_norms,
    tail_diameter,
)
from dmnls.evolution import SolverParams, Trace, solve_dmnls, solve_nls
from dmnls.experiments import _random_forcing
from dmnls.grid import (
    Field2D,
    band_limited_field,
    free_propagate,
    gaussian_field,
    make_grid,
    mass,
    plane_wave,
)
from dmnls.nonlinearity import cubic, defect, gauss_legendre_01

from oracles import lsq_slope


def free_trace(phi, times):
    snaps = [free_propagate(phi, t) for t in times]
    return Trace(np.asarray(times), snaps, phi.grid, "nls")


class TestRescale:
    def test_identity(self, random_field):
        out = rescale(random_field, 1.0)
        assert out.grid == random_field.grid
        assert mass(out - random_field) == 0.0

    def test_isometry(self, random_field):
        for lam in (0.5, 0.25, 2.0):
            assert abs(mass(rescale(random_field, lam)) - mass(random_field)) <= 1e-13

    def test_involution(self, random_field):
        back = rescale(rescale(random_field, 0.25), 4.0)
        assert back.grid == random_field.grid
        assert mass(back - random_field) <= 1e-13 * mass(random_field)

    def test_rejects_nonpositive(self, random_field):
        with pytest.raises(ValueError):
            rescale(random_field, 0.0)


class TestSpacetimeNorms:
    def test_zero_trace(self, grid_small):
        z = Field2D(grid_small, np.zeros((64, 64)))
        tr = free_trace(z, np.linspace(0, 1, 5))
        rep = spacetime_norms(tr, K=4)
        assert rep.linf_l2 == rep.l4_spacetime == rep.shifted_sup_l4 == 0.0

    def test_single_snapshot_constant(self):
        g = make_grid(2 * np.pi, 32)
        one = Field2D(g, np.ones((32, 32)))
        tr = Trace(np.array([0.0]), [one], g, "nls")
        T = 3.0
        rep = spacetime_norms(tr, K=4, window=(0.0, T))
        assert rep.l4_spacetime == pytest.approx((T * 4 * np.pi**2) ** 0.25, rel=1e-12)

    def test_plane_wave_shift_invariance(self, grid_small):
        pw = plane_wave(grid_small, (2, 1))
        tr = free_trace(pw, np.linspace(0, 1, 9))
        for K in (1, 4, 16):
            rep = spacetime_norms(tr, K)
            assert rep.shifted_sup_l4 == pytest.approx(rep.l4_spacetime, rel=1e-12)

    def test_shift_sup_dominates_unshifted(self, grid_small, rng):
        f = band_limited_field(grid_small, 5, rng)
        tr = free_trace(f, np.linspace(0, 1, 9))
        rep = spacetime_norms(tr, K=8)
        assert rep.shifted_sup_l4 >= rep.l4_spacetime - 1e-15

    def test_window_monotone(self, grid_small, rng):
        f = band_limited_field(grid_small, 5, rng)
        tr = free_trace(f, np.linspace(0, 2, 17))
        small = spacetime_norms(tr, 4, window=(0.0, 1.0))
        large = spacetime_norms(tr, 4, window=(0.0, 2.0))
        assert large.l4_spacetime >= small.l4_spacetime
        assert large.linf_l2 >= small.linf_l2

    def test_theta_grid_stability(self, grid_small, rng):
        f = band_limited_field(grid_small, 4, rng)
        tr = free_trace(f, np.linspace(0, 1, 9))
        a = spacetime_norms(tr, 16).shifted_sup_l4
        b = spacetime_norms(tr, 32).shifted_sup_l4
        assert abs(a - b) <= 0.01 * a


class TestShiftedDuhamelRatio:
    def test_depends_on_difference_only(self, grid_small, rng):
        forcing = _random_forcing(grid_small, rng, np.linspace(0, 1, 9), 4)
        assert shifted_duhamel_ratio(forcing, 0.875, 0.375) == shifted_duhamel_ratio(
            forcing, 0.5, 0.0
        )

    def test_zero_forcing_rejected(self, grid_small):
        z = Field2D(grid_small, np.zeros((64, 64)))
        tr = Trace(np.linspace(0, 1, 5), [z] * 5, grid_small, "nls")
        with pytest.raises(ValueError, match="zero forcing"):
            shifted_duhamel_ratio(tr, 0.0, 0.0)

    def test_uniformity_scan(self, grid_small, rng):
        thetas = np.arange(9) / 8
        for _ in range(3):
            forcing = _random_forcing(grid_small, rng, np.linspace(0, 1, 9), 4)
            vals = [
                shifted_duhamel_ratio(forcing, th, sg) for th in thetas for sg in thetas
            ]
            assert max(vals) / min(vals) <= 3.0
            assert min(vals) > 0


class TestDecomposition:
    def test_plane_wave_all_terms_vanish(self, grid_small):
        pw = plane_wave(grid_small, (1, 0))
        tr = free_trace(pw, np.linspace(0, 0.5, 5))
        rep = decomposition_terms(tr, 0.5, 8.0, gauss_legendre_01(8))
        assert rep.low_term < 1e-10
        assert rep.high_term < 1e-10
        assert rep.dm_high_term < 1e-10

    def test_band_limited_high_terms_vanish(self, grid_small, rng):
        f = band_limited_field(grid_small, 3, rng)
        tr = free_trace(f, np.linspace(0, 0.5, 5))
        N = grid_small.nyquist / 3  # band sits fully below the cutoff
        rep = decomposition_terms(tr, 0.5, N, gauss_legendre_01(8))
        assert rep.high_term <= 1e-10
        assert rep.dm_high_term <= 1e-10

    def test_rejects_cutoff_at_nyquist(self, grid_small, rng):
        f = band_limited_field(grid_small, 3, rng)
        tr = free_trace(f, np.linspace(0, 0.5, 5))
        with pytest.raises(ValueError, match="Nyquist"):
            decomposition_terms(tr, 0.5, grid_small.nyquist, gauss_legendre_01(8))

    def test_pointwise_identity(self, rng):
        # low + high - dm_high == defect of the rescaled field, exactly
        g = make_grid(8 * np.pi, 64)
        rule = gauss_legendre_01(8)
        f = gaussian_field(g)
        for lam in (0.5, 0.25):
            low, high, dm_high = decomposition_fields(f, lam, 4.0, rule)
            combined = low + high - dm_high
            target = defect(rescale(f, lam), rule)
            scale = max(mass(target), 1e-30)
            assert mass(combined - target) <= 1e-10 * scale

    def test_low_term_quarter_per_halving(self):
        g = make_grid(16 * np.pi, 128)
        f = gaussian_field(g, width=2.0)
        tr = free_trace(f, np.linspace(0, 0.25, 3))
        rule = gauss_legendre_01(8)
        reps = {
            lam: decomposition_terms(tr, lam, 4.0, rule) for lam in (0.25, 0.125)
        }
        ratio = reps[0.25].low_term / reps[0.125].low_term
        assert 3.5 <= ratio <= 4.5


class TestScattering:
    def test_free_trace_profile_constant(self, grid_small, rng):
        f = band_limited_field(grid_small, 4, rng)
        tr = free_trace(f, np.linspace(0, 2, 7))
        pairs = scattering_diagnostic(tr)
        assert max(d for _, d in pairs) <= 1e-12

    def test_zero_trace(self, grid_small):
        z = Field2D(grid_small, np.zeros((64, 64)))
        tr = Trace(np.linspace(0, 2, 5), [z] * 5, grid_small, "nls")
        assert all(d == 0.0 for _, d in scattering_diagnostic(tr))

    def test_needs_three_snapshots(self, grid_small):
        z = Field2D(grid_small, np.zeros((64, 64)))
        tr = Trace(np.linspace(0, 1, 2), [z] * 2, grid_small, "nls")
        with pytest.raises(ValueError):
            scattering_diagnostic(tr)

    def test_small_data_tail_settles(self):
        # numerical scattering: the undone trajectory is Cauchy in the tail
        g = make_grid(8 * np.pi, 64)
        phi = gaussian_field(g, amplitude=0.3)
        tr = solve_dmnls(phi, SolverParams(dt=2e-3, t_final=4.0, snapshot_stride=250))
        pairs = scattering_diagnostic(tr)
        early = tail_diameter(pairs, (0.0, 2.0))
        late = tail_diameter(pairs, (2.0, 4.0))
        assert early / late >= 2.0


class TestSlopeFit:
    def test_matches_longhand_least_squares(self, rng):
        x = np.array([1.0, 0.5, 0.25, 0.125])
        y = 3.7 * x**2.13 * np.exp(0.01 * rng.standard_normal(4))
        assert fit_loglog_slope(x, y) == pytest.approx(lsq_slope(x, y), abs=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            fit_loglog_slope(np.array([1.0, -1.0]), np.array([1.0, 1.0]))
