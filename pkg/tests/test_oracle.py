import math

import pytest

import scarf
from scarf import BracketError, Edge, Exponent, MatchKind, RegimeError, ShootingConfig
from scarf.kernels import NUMBA_ENABLED, shoot_halfcell, shoot_halfcell_py

HALF_PI_SQ = math.pi**2 / 2.0


class TestShoot:
    def test_eigenvalue_nulls_matching_function(self, bound_params):
        cfg = ShootingConfig(exponent=Exponent.PLUS, match=MatchKind.SLOPE_AT_MID)
        val = scarf.shoot(bound_params, HALF_PI_SQ * 6.25, cfg)
        assert abs(val) <= 1e-8

    def test_band_lower_edge_nulls(self, band_params):
        cfg = ShootingConfig(exponent=Exponent.MINUS, match=MatchKind.SLOPE_AT_MID)
        val = scarf.shoot(band_params, HALF_PI_SQ * 0.01, cfg)
        assert abs(val) <= 1e-8

    def test_off_eigenvalue_brackets_ground_state(self, bound_params):
        cfg = ShootingConfig(exponent=Exponent.PLUS, match=MatchKind.SLOPE_AT_MID)
        low = scarf.shoot(bound_params, 20.0, cfg)
        high = scarf.shoot(bound_params, 40.0, cfg)
        assert low != 0.0 and high != 0.0
        assert math.copysign(1.0, low) != math.copysign(1.0, high)

    def test_minus_exponent_rejected_for_bound(self, bound_params):
        cfg = ShootingConfig(exponent=Exponent.MINUS)
        with pytest.raises(RegimeError):
            scarf.shoot(bound_params, 10.0, cfg)

    def test_config_validation(self, bound_params):
        with pytest.raises(ValueError):
            ShootingConfig(delta=-1.0)
        with pytest.raises(ValueError):
            ShootingConfig(rtol=0.0)
        with pytest.raises(ValueError):
            ShootingConfig(series_order=3)
        with pytest.raises(ValueError):
            # delta must stay below a/100
            scarf.shoot(bound_params, 10.0, ShootingConfig(delta=0.02))


class TestFindEigen:
    def test_bound_ground(self, bound_params):
        cfg = ShootingConfig(match=MatchKind.SLOPE_AT_MID)
        res = scarf.find_eigen(bound_params, (25.0, 35.0), cfg)
        assert res.energy == pytest.approx(30.8425138, abs=5e-8)
        assert res.energy == pytest.approx(HALF_PI_SQ * 6.25, rel=1e-10)
        assert res.bracket[0] <= res.energy <= res.bracket[1]
        assert res.residual <= 1e-10
        assert not res.flagged

    def test_band_upper_even(self, band_params):
        cfg = ShootingConfig(exponent=Exponent.PLUS, match=MatchKind.SLOPE_AT_MID)
        res = scarf.find_eigen(band_params, (3.5, 4.5), cfg)
        assert res.energy == pytest.approx(HALF_PI_SQ * 0.81, rel=1e-8)

    def test_band_lower_odd(self, band_params):
        cfg = ShootingConfig(exponent=Exponent.MINUS, match=MatchKind.VALUE_AT_MID)
        res = scarf.find_eigen(band_params, (5.5, 6.5), cfg)
        assert res.energy == pytest.approx(5.9711107, abs=5e-8)

    def test_no_sign_change_raises(self, bound_params):
        cfg = ShootingConfig(match=MatchKind.SLOPE_AT_MID)
        with pytest.raises(BracketError):
            scarf.find_eigen(bound_params, (40.0, 50.0), cfg)

    def test_delta_robustness(self, bound_params, band_params):
        # halving the start offset moves energies by under 1e-9 relative
        for params, bracket, cfg in [
            (bound_params, (25.0, 35.0), ShootingConfig(match=MatchKind.SLOPE_AT_MID)),
            (band_params, (0.02, 0.2),
             ShootingConfig(exponent=Exponent.MINUS, match=MatchKind.SLOPE_AT_MID)),
        ]:
            res = scarf.find_eigen(params, bracket, cfg)
            assert res.delta_sensitivity <= 1e-9
            assert not res.flagged


class TestScanSpectrum:
    def test_bound_scan(self, bound_params):
        scan = scarf.scan_spectrum(bound_params, 120.0)
        energies = [r.energy for r in scan]
        assert energies == pytest.approx(
            [HALF_PI_SQ * 6.25, HALF_PI_SQ * 12.25, HALF_PI_SQ * 20.25], rel=1e-9)
        assert [r.classification for r in scan] == [
            (0, Edge.NOT_APPLICABLE), (1, Edge.NOT_APPLICABLE), (2, Edge.NOT_APPLICABLE)]

    def test_band_scan_and_family_disjointness(self, band_params):
        scan = scarf.scan_spectrum(band_params, 20.0)
        assert [r.energy for r in scan] == pytest.approx(
            [0.04934802, 3.99718978, 5.97111066, 17.81463594], abs=5e-7)
        for res in scan:
            n, edge = res.classification
            line = dict(
                (( ln.n, ln.edge), ln) for ln in scarf.spectrum_lines(band_params, 2)
            )[(n, edge)]
            assert (res.exponent, res.match) == scarf.predicted_family(line)

    def test_free_particle_degenerate_pairs(self):
        p = scarf.PotentialParams(s=0.5)
        scan = scarf.scan_spectrum(p, 20.0)
        energies = [round(r.energy / HALF_PI_SQ, 6) for r in scan]
        assert energies == [1.0, 1.0, 4.0, 4.0]
        assert {r.classification for r in scan} == {
            (0, Edge.UPPER), (1, Edge.LOWER), (1, Edge.UPPER), (2, Edge.LOWER)}

    def test_rejects_bad_e_max(self, bound_params):
        with pytest.raises(ValueError):
            scarf.scan_spectrum(bound_params, -1.0)


class TestFiniteDifference:
    def test_first_two_levels(self, bound_params):
        levels = scarf.fd_bound_spectrum(bound_params, grid_points=4000, k_levels=2)
        exact = [HALF_PI_SQ * 6.25, HALF_PI_SQ * 12.25]
        for got, ref in zip(levels, exact):
            assert got == pytest.approx(ref, rel=1e-4)

    def test_convergence_with_grid(self, bound_params):
        # raw discretization error is O(h^2): strictly monotone in N
        # (the Richardson-extrapolated public result already sits at the
        # eigensolver noise floor, where monotonicity has no meaning)
        from scarf.oracle import _fd_levels
        exact = HALF_PI_SQ * 6.25
        err = [abs(_fd_levels(bound_params, n, 1)[0] - exact)
               for n in (500, 1000, 2000, 4000)]
        assert err[0] > err[1] > err[2] > err[3]
        assert err[0] / err[3] == pytest.approx(64.0, rel=0.05)

    def test_shallow_well(self):
        p = scarf.PotentialParams(s=0.9)
        levels = scarf.fd_bound_spectrum(p, grid_points=4000, k_levels=1)
        assert levels[0] == pytest.approx(HALF_PI_SQ * 1.96, rel=1e-4)
        assert levels[0] == pytest.approx(9.6722, abs=5e-4)

    def test_regime_and_parameter_guards(self, band_params, bound_params):
        with pytest.raises(RegimeError):
            scarf.fd_bound_spectrum(band_params)
        with pytest.raises(ValueError):
            scarf.fd_bound_spectrum(bound_params, grid_points=100)
        with pytest.raises(ValueError):
            scarf.fd_bound_spectrum(bound_params, grid_points=400, k_levels=200)

    def test_nontrivial_units_propagate(self):
        # a != 1, m != 1 must thread every 2m and 1/a factor consistently
        p = scarf.PotentialParams(s=1.3, a=0.7, m=2.5)
        closed = scarf.bound_energy(p, 1).energy
        cfg = ShootingConfig(match=MatchKind.VALUE_AT_MID)
        res = scarf.find_eigen(p, (closed * 0.9, closed * 1.1), cfg,
                               compute_sensitivity=False)
        assert res.energy == pytest.approx(closed, rel=1e-10)
        fd = scarf.fd_bound_spectrum(p, grid_points=2000, k_levels=2)
        assert fd[1] == pytest.approx(closed, rel=1e-4)
        pb = scarf.PotentialParams(s=0.23, a=1.9, m=0.6)
        lo = scarf.band_edge_energies(pb, 0)[0]
        cfg_lo = ShootingConfig(exponent=Exponent.MINUS, match=MatchKind.SLOPE_AT_MID)
        res_lo = scarf.find_eigen(pb, (lo.energy * 0.5, lo.energy * 1.5), cfg_lo,
                                  compute_sensitivity=False)
        assert res_lo.energy == pytest.approx(lo.energy, rel=1e-9)

    def test_cross_consistency_with_shooting(self, bound_params):
        fd = scarf.fd_bound_spectrum(bound_params, grid_points=4000, k_levels=2)
        cfgs = [ShootingConfig(match=MatchKind.SLOPE_AT_MID),
                ShootingConfig(match=MatchKind.VALUE_AT_MID)]
        brackets = [(25.0, 35.0), (55.0, 65.0)]
        for level, cfg, bracket in zip(fd, cfgs, brackets):
            shot = scarf.find_eigen(bound_params, bracket, cfg, compute_sensitivity=False)
            assert abs(shot.energy - level) / shot.energy <= 1e-4


class TestKernelPaths:
    def test_non_finite_energy_terminates(self):
        # NaN propagation must end in step underflow, never a spin to max_steps
        u, v, m, n, status = shoot_halfcell_py(
            -37.0, float("inf"), math.pi, 1e-3, 1e-7, 2.5e-4, 0.5,
            1e-13, 1e-280, 100_000)
        assert status == 2
        assert n < 1000

    def test_python_fallback_matches_jit(self, bound_params):
        if not NUMBA_ENABLED:
            pytest.skip("numba disabled; single path only")
        args = (-(0.25 - 4.0) * math.pi**2, 60.0, math.pi, 1e-3,
                2.45e-8, 6.1e-5, 0.5, 1e-13, 1e-280, 1_000_000)
        u1, v1, m1, n1, s1 = shoot_halfcell(*args)
        u2, v2, m2, n2, s2 = shoot_halfcell_py(*args)
        assert s1 == s2 == 0
        assert u1 == pytest.approx(u2, rel=1e-10)
        assert v1 == pytest.approx(v2, rel=1e-10)
        assert m1 == pytest.approx(m2, rel=1e-10)
