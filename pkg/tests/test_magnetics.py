import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evortex import electron_state, Grid, observables, DomainError, SamplingError
from evortex import magnetics as mg
from evortex.modes import LGMode, ModeSpec, synthesize

STATE = electron_state(200.0)
ENV = mg.magnetic_environment(2.0, STATE)


def spec(ell, n=0, env=ENV):
    return mg.LandauSpec(ell=ell, n=n, k_z=STATE.wavenumber, env=env)


class TestEnvironment:
    def test_cyclotron_is_twice_larmor(self):
        assert ENV.omega_cyclotron == 2.0 * ENV.omega_larmor
        assert ENV.abs_larmor > 0

    def test_larmor_length_invariant(self):
        # z_m = sqrt(E/hbar|Omega_L|) * w_m for the non-relativistic branch
        expected = math.sqrt(
            STATE.kinetic_energy * mg.KEV_J / (mg.HBAR_SI * ENV.abs_larmor)
        ) * ENV.w_m
        assert ENV.z_m == pytest.approx(expected, rel=1e-12)

    def test_magnetic_length_scaling(self):
        env2 = mg.magnetic_environment(8.0, STATE)
        assert env2.w_m == pytest.approx(ENV.w_m / 2.0, rel=1e-12)

    def test_sign_conventions(self):
        down = mg.magnetic_environment(-2.0, STATE)
        assert ENV.sigma == 1 and down.sigma == -1
        # signed Larmor frequency is opposite to the field direction
        assert ENV.omega_larmor < 0 < down.omega_larmor

    def test_zero_field_rejected(self):
        with pytest.raises(DomainError):
            mg.magnetic_environment(0.0, STATE)

    def test_one_tesla_scale(self):
        env1 = mg.magnetic_environment(1.0, STATE)
        assert env1.w_m == pytest.approx(51.3, rel=1e-2)  # nm
        assert env1.abs_larmor == pytest.approx(8.794e10, rel=1e-3)  # rad/s


class TestLandauField:
    def test_ground_state_gaussian(self):
        grid = mg._default_grid(spec(0))
        f = mg.landau_field(spec(0), grid)
        r, _ = f.polar()
        mask = r < 2.0 * ENV.w_m
        expected = np.exp(-((r[mask] / ENV.w_m) ** 2))
        got = np.abs(f.samples[mask])
        assert np.allclose(got / got.max(), expected, atol=1e-9)

    def test_radial_maxima_count(self):
        s = spec(2, n=1)
        f = mg.landau_field(s, mg._default_grid(s))
        c = f.nx // 2
        prof = np.abs(f.samples[c, c:]) ** 2
        peaks = [
            i
            for i in range(1, len(prof) - 1)
            if prof[i] > prof[i - 1] and prof[i] >= prof[i + 1]
            and prof[i] > 0.01 * prof.max()
        ]
        assert len(peaks) == 2  # n+1 rings

    def test_matches_free_lg_at_waist(self):
        s = spec(3, n=2)
        grid = mg._default_grid(s)
        f = mg.landau_field(s, grid)
        free = synthesize(ModeSpec.single(LGMode(ENV.w_m, 3, 2)), grid, STATE)
        assert np.allclose(f.samples, free.samples, atol=1e-12)

    def test_undersampled_grid_rejected(self):
        with pytest.raises(SamplingError):
            mg.landau_field(spec(5, n=3), Grid(128, 0.5))


class TestKineticCurrent:
    def test_counter_rotating_zero_crossing(self):
        # sigma*ell < 0: j_phi changes sign at the ring radius w_m sqrt(|l|/2)
        s = spec(-2)
        f = mg.landau_field(s, mg._default_grid(s))
        rho, jx, jy = mg.kinetic_current(s, f)
        xx, yy = f.meshgrid()
        r = np.hypot(xx, yy)
        jphi = (-yy * jx + xx * jy) / np.where(r == 0, 1, r)
        c = f.nx // 2
        prof, rr = jphi[c, c + 1 :], r[c, c + 1 :]
        sel = (rr > 0.2 * ENV.w_m) & (rr < 4.0 * ENV.w_m)
        crossings = rr[sel][:-1][np.diff(np.sign(prof[sel])) != 0]
        assert len(crossings) == 1
        assert crossings[0] == pytest.approx(ENV.w_m * math.sqrt(1.0), abs=f.pitch[0])

    def test_co_rotating_single_signed(self):
        s = spec(2)
        f = mg.landau_field(s, mg._default_grid(s))
        rho, jx, jy = mg.kinetic_current(s, f)
        xx, yy = f.meshgrid()
        r = np.hypot(xx, yy)
        jphi = -yy * jx + xx * jy
        mask = (rho > 1e-6 * rho.max()) & (r > 0.1 * ENV.w_m)
        assert np.all(jphi[mask] > 0)

    def test_zero_charge_diamagnetic_rotation(self):
        s = spec(0)
        f = mg.landau_field(s, mg._default_grid(s))
        rho, jx, jy = mg.kinetic_current(s, f)
        xx, yy = f.meshgrid()
        r = np.hypot(xx, yy)
        jphi = (-yy * jx + xx * jy) / np.where(r == 0, 1, r)
        mask = (rho > 1e-6 * rho.max()) & (r > f.pitch[0])
        expected = ENV.sigma * 2.0 * r[mask] / ENV.w_m**2 * rho[mask]
        assert np.allclose(jphi[mask], expected, rtol=1e-6, atol=1e-12 * np.abs(expected).max())


class TestEnergies:
    def test_co_rotating_level(self):
        e_par, e_z, e_g, e_perp, n_l = mg.landau_energies(spec(1))
        hw = mg.HBAR_SI * ENV.abs_larmor / mg.KEV_J
        assert n_l == 1
        assert e_perp == pytest.approx(3.0 * hw, rel=1e-12)

    def test_counter_rotating_lowest_level(self):
        for ell in (-1, -4):
            e_par, e_z, e_g, e_perp, n_l = mg.landau_energies(spec(ell))
            hw = mg.HBAR_SI * ENV.abs_larmor / mg.KEV_J
            assert n_l == 0
            assert e_perp == pytest.approx(hw, rel=1e-12)

    def test_zero_charge(self):
        e_par, e_z, e_g, e_perp, n_l = mg.landau_energies(spec(0))
        assert e_z == 0.0
        assert e_perp == pytest.approx(e_g, rel=1e-12)

    def test_decomposition(self):
        for ell, n in ((3, 1), (-2, 2), (0, 0)):
            e_par, e_z, e_g, e_perp, n_l = mg.landau_energies(spec(ell, n))
            assert e_perp == pytest.approx(e_z + e_g, rel=1e-12)
            assert n_l >= 0


class TestKineticOam:
    @pytest.mark.parametrize("ell,n,sigma,expected", [
        (-3, 0, 1, 1.0),
        (3, 0, 1, 7.0),
        (2, 1, -1, -3.0),
        (0, 0, -1, -1.0),
    ])
    def test_closed_form_with_grid_oracle(self, ell, n, sigma, expected):
        env = mg.magnetic_environment(2.0 * sigma, STATE)
        val = mg.kinetic_oam(spec(ell, n, env))  # raises on oracle mismatch
        assert val == expected

    def test_canonical_vs_kinetic_same_grid(self):
        s = spec(-3)
        f = mg.landau_field(s, mg._default_grid(s))
        assert observables(f).canonical_oam == pytest.approx(-3.0, abs=1e-3)
        assert mg.kinetic_oam(s) == 1.0

    def test_field_strength_independence(self):
        for b in (1.0, 2.0, 4.0):
            env = mg.magnetic_environment(b, STATE)
            assert mg.kinetic_oam(spec(2, 1, env)) == 7.0

    def test_diamagnetic_sign(self):
        # M_z = (e/2m_ec) <L_kin> with e < 0: moment antiparallel to B
        for sigma in (1, -1):
            env = mg.magnetic_environment(2.0 * sigma, STATE)
            l_kin = mg.kinetic_oam(spec(-2, 0, env), cross_check=False)
            m_z_sign = -math.copysign(1.0, l_kin)
            assert m_z_sign == -sigma

    @settings(max_examples=15, deadline=None)
    @given(
        st.integers(min_value=-5, max_value=5),
        st.integers(min_value=0, max_value=3),
        st.sampled_from([1, -1]),
    )
    def test_minimal_kinetic_oam_property(self, ell, n, sigma):
        env = mg.magnetic_environment(2.0 * sigma, STATE)
        s = spec(ell, n, env)
        val = mg.kinetic_oam(s, cross_check=False)
        assert val == sigma * (2 * s.landau_index + 1)
        assert abs(val) >= 1.0
        assert math.copysign(1.0, val) == sigma


class TestRotation:
    ZS = np.linspace(0.0, ENV.z_m, 7)
    GRID = Grid(512, 8.0 * ENV.w_m * 2.0 / 512)

    def test_lzg_phase_values(self):
        # sigma*ell + (2n+|ell|+1) = 2 + 5 = 7 for (ell=2, n=1, sigma=+1)
        _, dkz = mg.lzg_phase(spec(2, 1), 0.0)
        assert dkz == pytest.approx(-7.0 / ENV.z_m, rel=1e-12)
        phase, _ = mg.lzg_phase(spec(2, 1), ENV.z_m)
        assert phase == pytest.approx(-7.0, rel=1e-12)

    def test_larmor_rotation(self):
        slope = mg.pattern_rotation_slope(
            [(spec(2), 1.0), (spec(-2), 1.0)], self.ZS, self.GRID
        )
        assert slope * ENV.z_m == pytest.approx(1.0, rel=2e-2)

    def test_cyclotron_rotation(self):
        slope = mg.pattern_rotation_slope(
            [(spec(0), 1.0), (spec(2), 2.0)], self.ZS, self.GRID
        )
        assert slope * ENV.z_m == pytest.approx(2.0, rel=2e-2)

    def test_zero_rotation(self):
        slope = mg.pattern_rotation_slope(
            [(spec(0), 1.0), (spec(-2), 2.0)], self.ZS, self.GRID
        )
        assert abs(slope * ENV.z_m) < 0.02

    def test_sign_flips_with_field(self):
        env = mg.magnetic_environment(-2.0, STATE)
        slope = mg.pattern_rotation_slope(
            [(spec(2, env=env), 1.0), (spec(-2, env=env), 1.0)], self.ZS, self.GRID
        )
        assert slope * env.z_m == pytest.approx(-1.0, rel=2e-2)

    def test_mixed_environments_rejected(self):
        env = mg.magnetic_environment(4.0, STATE)
        with pytest.raises(DomainError):
            mg.propagate_superposition(
                [(spec(2), 1.0), (spec(-2, env=env), 1.0)], 0.0, self.GRID
            )


class TestMeanAngularVelocity:
    @pytest.mark.parametrize("ell,sigma,factor", [
        (-2, 1, 0.0),
        (0, 1, 1.0),
        (5, 1, 2.0),
        (2, -1, 0.0),
        (-1, -1, -2.0),
        (0, -1, -1.0),
    ])
    def test_branches(self, ell, sigma, factor):
        env = mg.magnetic_environment(2.0 * sigma, STATE)
        val = mg.mean_angular_velocity(spec(ell, 0, env))  # raises on oracle mismatch
        assert val == pytest.approx(factor * env.abs_larmor, abs=1e-6 * env.abs_larmor)

    def test_higher_radial_index(self):
        assert mg.mean_angular_velocity(spec(3, 2)) == pytest.approx(
            2.0 * ENV.abs_larmor, rel=1e-9
        )


class TestSemiclassical:
    B = 1.0
    OMEGA_C = mg.E_CHARGE_SI * B / mg.M_E_SI
    T_C = 2.0 * math.pi / OMEGA_C

    def trajectory(self, periods=2.0, steps_per_period=1000):
        return mg.integrate_semiclassical(
            (0.0, 0.0, 0.0),
            (1e-22, 0.0, 0.0),
            (1.0, 0.0, 0.0),
            b_field=(0.0, 0.0, self.B),
            duration=periods * self.T_C,
            step=self.T_C / steps_per_period,
        )

    def test_frequency_ratio_is_two(self):
        traj = self.trajectory()
        wp = mg.fit_rotation_rate(traj.t, traj.p[:, :2])
        wl = mg.fit_rotation_rate(traj.t, traj.L[:, :2])
        assert wp / wl == pytest.approx(2.0, abs=1e-6)
        assert wp == pytest.approx(self.OMEGA_C, rel=1e-6)

    def test_antiparallel_after_one_cyclotron_period(self):
        traj = self.trajectory(periods=1.0)
        p0, pf = traj.p[0], traj.p[-1]
        l0, lf = traj.L[0], traj.L[-1]
        assert float(p0 @ pf) / float(p0 @ p0) == pytest.approx(1.0, abs=1e-6)
        assert float(l0 @ lf) == pytest.approx(-1.0, abs=1e-6)

    def test_energy_conserved_in_pure_b(self):
        traj = self.trajectory()
        ke = (traj.p**2).sum(axis=1)
        assert abs(ke[-1] / ke[0] - 1.0) < 1e-6

    def test_helicity_conserved_in_pure_e(self):
        traj = mg.integrate_semiclassical(
            (0.0, 0.0, 0.0),
            (0.0, 0.0, 1e-22),
            (0.0, 0.6, 0.8),
            e_field=(1e5, 0.0, 0.0),
            duration=1e-10,
            step=1e-13,
        )
        hel = (traj.L * traj.p).sum(axis=1) / np.linalg.norm(traj.p, axis=1)
        assert np.abs(hel - hel[0]).max() < 1e-9
        # the field did deflect the momentum
        assert np.linalg.norm(traj.p[-1] - traj.p[0]) > 1e-3 * np.linalg.norm(traj.p[0])

    def test_free_motion_straight_line(self):
        traj = mg.integrate_semiclassical(
            (0.0, 0.0, 0.0), (0.0, 0.0, 1e-22), (0.0, 0.0, 1.0),
            duration=1e-10, step=1e-13,
        )
        assert np.allclose(traj.p, traj.p[0], atol=0.0)
        assert np.allclose(traj.L, traj.L[0], atol=0.0)
        v = traj.p[0] / mg.M_E_SI
        assert np.allclose(traj.r, np.outer(traj.t, v), rtol=1e-12, atol=1e-30)

    def test_step_guard(self):
        with pytest.raises(mg.StabilityError):
            mg.integrate_semiclassical(
                (0, 0, 0), (1e-22, 0, 0), (1, 0, 0),
                b_field=(0, 0, self.B), duration=self.T_C, step=self.T_C / 50,
            )


class TestMonopole:
    def test_shift_rule(self):
        assert mg.monopole_oam_shift(0.0, 1.0) == 1.0
        assert mg.monopole_oam_shift(2.0, 0.0) == 2.0
        assert mg.monopole_oam_shift(-1.0, 2.5) == 1.5

    @pytest.mark.parametrize("alpha", [1.0, 2.0, -1.5])
    def test_classical_oracle(self, alpha):
        kick = mg.monopole_azimuthal_kick(alpha, 100.0)
        assert kick == pytest.approx(alpha, rel=1e-2)

    def test_kick_independent_of_speed(self):
        k1 = mg.monopole_azimuthal_kick(1.0, 50.0, speed=5e7)
        k2 = mg.monopole_azimuthal_kick(1.0, 50.0, speed=2e8)
        assert k1 == pytest.approx(k2, rel=1e-2)

    def test_bad_impact_parameter(self):
        with pytest.raises(DomainError):
            mg.monopole_azimuthal_kick(1.0, 0.0)
