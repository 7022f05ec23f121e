import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evortex import DomainError, electron_state
from evortex import radiation as rad
from evortex.constants import REST_ENERGY_KEV


def state_with_beta(beta: float):
    gamma = 1.0 / math.sqrt(1.0 - beta**2)
    return electron_state(REST_ENERGY_KEV * (gamma - 1.0))


BETA08 = state_with_beta(0.8)


class TestCherenkovAngle:
    def test_classical_limit(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        theta = rad.cherenkov_angle(cfg, 0.0)
        assert math.cos(theta) == pytest.approx(1.0 / 1.2, rel=1e-9)
        assert math.degrees(theta) == pytest.approx(33.557, abs=0.01)

    def test_quantum_recoil_shrinks_cone(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        assert rad.cherenkov_angle(cfg, 5.0) < rad.cherenkov_angle(cfg, 0.0)

    def test_below_threshold(self):
        cfg = rad.CherenkovConfig(electron_state(10.0), 1.1)
        assert cfg.state.beta * 1.1 < 1.0
        assert rad.cherenkov_angle(cfg, 1.0) is None

    def test_cutoff_in_mev_range(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        cutoff = rad.cherenkov_cutoff_ev(cfg)
        assert 1e5 < cutoff < 1e7
        # emission vanishes right at the cutoff
        assert rad.cherenkov_angle(cfg, cutoff * 0.999999) == pytest.approx(
            0.0, abs=1e-2
        )
        assert rad.spectral_rate(cfg, cutoff * 1.001) == 0.0

    def test_dispersive_index(self):
        cfg = rad.CherenkovConfig(BETA08, lambda hw: 1.5 + 1e-3 * hw)
        assert rad.cherenkov_angle(cfg, 2.0) > rad.cherenkov_angle(
            rad.CherenkovConfig(BETA08, 1.5), 2.0
        )

    def test_negative_energy_rejected(self):
        with pytest.raises(DomainError):
            rad.cherenkov_angle(rad.CherenkovConfig(BETA08, 1.5), -1.0)


class TestPlaneWave:
    def test_map_integrates_to_closed_form(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        thetas = np.linspace(0.0, math.pi / 2, 2000)
        pw = rad.cherenkov_planewave(cfg, [2.0], thetas)
        integral = 2.0 * math.pi * np.trapezoid(
            pw.density[0] * np.sin(thetas), thetas
        )
        assert integral == pytest.approx(pw.spectral_density[0], rel=1e-6)

    def test_single_cell_ridge(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        thetas = np.linspace(0.0, math.pi / 2, 500)
        pw = rad.cherenkov_planewave(cfg, [2.0], thetas)
        assert np.count_nonzero(pw.density[0]) == 1
        ridge = thetas[np.argmax(pw.density[0])]
        assert ridge == pytest.approx(rad.cherenkov_angle(cfg, 2.0), abs=4e-3)

    def test_polarization_flag(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        pw = rad.cherenkov_planewave(cfg, [2.0], np.linspace(0, 1.5, 64))
        assert pw.polarization == "linear-in-plane"

    def test_below_threshold_grid_empty(self):
        cfg = rad.CherenkovConfig(electron_state(10.0), 1.1)
        pw = rad.cherenkov_planewave(cfg, [1.0, 2.0], np.linspace(0, 1.5, 64))
        assert np.all(pw.density == 0.0)
        assert np.all(pw.spectral_density == 0.0)

    def test_spectral_density_leading_order(self):
        cfg = rad.CherenkovConfig(BETA08, 1.5)
        theta = rad.cherenkov_angle(cfg, 0.0)
        assert rad.spectral_rate(cfg, 0.0) == pytest.approx(
            rad.FINE_STRUCTURE * 0.8 * math.sin(theta) ** 2, rel=1e-12
        )


class TestVortexRing:
    CFG = rad.CherenkovConfig(BETA08, 1.5, theta0=0.3)

    def test_exact_ring_support(self):
        thc = rad.cherenkov_angle(self.CFG, 2.0)
        thetas = np.linspace(0.0, math.pi / 2, 4000)
        dist = rad.cherenkov_vortex(self.CFG, 2.0, thetas)
        lo, hi = abs(thc - 0.3), thc + 0.3
        outside = (thetas < lo - 1e-3) | (thetas > hi + 1e-3)
        assert dist[outside].max() <= 1e-10 * dist.max()
        inside = (thetas > lo + 1e-3) & (thetas < hi - 1e-3)
        assert dist[inside].min() > 0.0

    def test_brightens_toward_edges(self):
        thc = rad.cherenkov_angle(self.CFG, 2.0)
        lo, hi = abs(thc - 0.3), thc + 0.3
        near_edge = rad.cherenkov_vortex(self.CFG, 2.0, np.array([lo + 0.01, hi - 0.01]))
        center = rad.cherenkov_vortex(self.CFG, 2.0, np.array([0.5 * (lo + hi)]))
        assert near_edge.min() > center[0]

    def test_total_rate_matches_plane_wave(self):
        # Chebyshev-weighted quadrature across the inverse-sqrt edges
        for hw in (0.5, 2.0, 4.0):
            thc = rad.cherenkov_angle(self.CFG, hw)
            x_lo, x_hi = math.cos(thc + 0.3), math.cos(abs(thc - 0.3))
            n = 4096
            tt = (np.arange(n) + 0.5) * math.pi / n
            x = 0.5 * (x_hi + x_lo) + 0.5 * (x_hi - x_lo) * np.cos(tt)
            nodes = np.arccos(x)
            vals = rad.cherenkov_vortex(self.CFG, hw, nodes)
            w = (math.pi / n) * np.sqrt(np.maximum((x_hi - x) * (x - x_lo), 0.0))
            rate = 2.0 * math.pi * (vals * w).sum()
            assert rate == pytest.approx(rad.spectral_rate(self.CFG, hw), rel=5e-3)

    def test_backward_emission_condition(self):
        thetas = np.linspace(0.0, math.pi, 4000)
        # small cone: no backward light
        thc = rad.cherenkov_angle(self.CFG, 2.0)
        assert thc + 0.3 < math.pi / 2
        d = rad.cherenkov_vortex(self.CFG, 2.0, thetas)
        assert d[thetas > math.pi / 2].max() == 0.0
        # large cone in a dense medium: ring crosses 90 degrees
        cfg = rad.CherenkovConfig(BETA08, 3.0, theta0=0.5)
        thc2 = rad.cherenkov_angle(cfg, 2.0)
        assert thc2 + 0.5 > math.pi / 2
        d2 = rad.cherenkov_vortex(cfg, 2.0, thetas)
        assert d2[thetas > math.pi / 2].sum() > 0.0

    def test_matched_angles_forward_peak(self):
        thc = rad.cherenkov_angle(rad.CherenkovConfig(BETA08, 1.5), 2.0)
        cfg = rad.CherenkovConfig(BETA08, 1.5, theta0=thc)
        small = np.array([1e-3, 2e-3, 4e-3, 8e-3])
        d = rad.cherenkov_vortex(cfg, 2.0, small)
        # 1/theta growth toward the axis
        ratio = d[:-1] / d[1:]
        assert np.all(ratio > 1.8)
        assert np.all(ratio < 2.2)

    def test_plane_wave_branch_rejected(self):
        with pytest.raises(DomainError):
            rad.cherenkov_vortex(rad.CherenkovConfig(BETA08, 1.5), 2.0, np.array([0.5]))

    def test_invalid_cone_angle(self):
        with pytest.raises(DomainError):
            rad.CherenkovConfig(BETA08, 1.5, theta0=2.0)


class TestSuperposition:
    CFG = rad.CherenkovConfig(BETA08, 1.5, theta0=0.3)
    THETAS = np.linspace(0.0, math.pi / 2, 500)
    PHIS = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False)

    def petal_count(self, m: np.ndarray) -> int:
        ring = m[:, np.argmax(m.max(axis=0))]
        spectrum = np.abs(np.fft.rfft(ring - ring.mean()))
        return int(np.argmax(spectrum[1:]) + 1)

    def test_three_petals(self):
        m = rad.cherenkov_superposition(
            self.CFG, (6.5, 3.5), (1.0, 1.0), 2.0, self.THETAS, self.PHIS
        )
        assert self.petal_count(m) == 3
        ring = m[:, np.argmax(m.max(axis=0))]
        visibility = (ring.max() - ring.min()) / (ring.max() + ring.min())
        assert visibility == pytest.approx(1.0, abs=1e-9)

    def test_zero_difference_uniform(self):
        m = rad.cherenkov_superposition(
            self.CFG, (4.5, 4.5), (1.0, 1.0), 2.0, self.THETAS, self.PHIS
        )
        ring = m[:, np.argmax(m.max(axis=0))]
        assert ring.max() - ring.min() <= 1e-12 * ring.max()

    def test_single_mode_limit(self):
        m = rad.cherenkov_superposition(
            self.CFG, (6.5, 3.5), (1.0, 1e-9), 2.0, self.THETAS, self.PHIS
        )
        ring = m[:, np.argmax(m.max(axis=0))]
        assert (ring.max() - ring.min()) / ring.max() < 1e-8

    def test_relative_phase_rotates_petals(self):
        m0 = rad.cherenkov_superposition(
            self.CFG, (5.5, 2.5), (1.0, 1.0), 2.0, self.THETAS, self.PHIS
        )
        m1 = rad.cherenkov_superposition(
            self.CFG,
            (5.5, 2.5),
            (1.0, np.exp(1j * 0.9)),
            2.0,
            self.THETAS,
            self.PHIS,
        )
        col = np.argmax(m0.max(axis=0))
        shift = np.argmax(
            np.real(np.fft.ifft(np.fft.fft(m0[:, col]) * np.conj(np.fft.fft(m1[:, col]))))
        )
        expected = 0.9 / 3.0 / (2.0 * math.pi / 360.0)
        wrapped = min(shift % 120, (-shift) % 120)
        assert abs(wrapped - expected) <= 1.0

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            rad.cherenkov_superposition(
                self.CFG, (6.5, 3.0), (1.0, 1.0), 2.0, self.THETAS, self.PHIS
            )
        with pytest.raises(DomainError):
            rad.cherenkov_superposition(
                self.CFG, (6.5, 3.5), (0.0, 0.0), 2.0, self.THETAS, self.PHIS
            )


class TestTransitionRadiation:
    def test_epsilon_reference_value(self):
        cfg = rad.TransitionConfig(electron_state(300.0), 1000, 0.5, 5.0)
        eps = rad.transition_epsilon(cfg)
        assert eps == pytest.approx(1.944e-3, rel=2e-2)
        assert abs(eps - 1.9e-3) < 0.05e-3
        assert cfg.gamma == pytest.approx(1.587, abs=1e-3)

    def test_plane_wave_scale(self):
        cfg = rad.TransitionConfig(electron_state(300.0), 0, 0.5, 5.0)
        eps = rad.transition_epsilon(cfg)
        ratio = eps / (5e-3 / cfg.state.total_energy)
        assert 0.1 < ratio < 10.0
        assert eps < 1e-4

    def test_zero_frequency(self):
        cfg = rad.TransitionConfig(electron_state(300.0), 5, 0.5, 0.0)
        assert rad.transition_epsilon(cfg) == 0.0

    def test_moment_magnitude(self):
        cfg = rad.TransitionConfig(electron_state(300.0), 10, 0.5, 5.0)
        assert cfg.moment_bohr == pytest.approx(11.0 / cfg.gamma, rel=1e-12)

    def test_normal_incidence_vanishes(self):
        cfg = rad.TransitionConfig(electron_state(300.0), 1000, 0.5, 5.0, 0.0)
        assert rad.transition_asymmetry(cfg, 5.0) == 0.0

    def test_sign_flip_under_charge_reversal(self):
        up = rad.TransitionConfig(electron_state(300.0), 40, 0.0, 5.0, 1.2)
        dn = rad.TransitionConfig(electron_state(300.0), -40, 0.0, 5.0, 1.2)
        a, b = rad.transition_asymmetry(up, 3.0), rad.transition_asymmetry(dn, 3.0)
        assert a == pytest.approx(-b, rel=1e-12)
        assert a != 0.0

    def test_linear_in_ell(self):
        def asym(ell):
            cfg = rad.TransitionConfig(electron_state(300.0), ell, 0.0, 5.0, 1.2)
            return rad.transition_asymmetry(cfg, 3.0)

        assert asym(2000) / asym(1000) == pytest.approx(2.0, abs=1e-9)

    def test_percent_level_example(self):
        cfg = rad.TransitionConfig(
            electron_state(300.0), 1000, 0.5, 5.0, math.radians(70.0)
        )
        asym = rad.transition_asymmetry(cfg, 5.5)
        assert 0.005 < asym < 0.05

    def test_callable_geometry(self):
        cfg = rad.TransitionConfig(electron_state(300.0), 100, 0.5, 5.0, 1.0)
        fixed = rad.transition_asymmetry(cfg, 2.0)
        called = rad.transition_asymmetry(cfg, lambda th: 2.0)
        assert fixed == called

    def test_invalid_configs(self):
        with pytest.raises(DomainError):
            rad.TransitionConfig(electron_state(300.0), 1, 0.5, -1.0)
        with pytest.raises(DomainError):
            rad.TransitionConfig(electron_state(300.0), 1, 0.3, 5.0)
        with pytest.raises(DomainError):
            rad.TransitionConfig(electron_state(300.0), 1, 0.5, 5.0, math.pi)

    @settings(max_examples=20, deadline=None)
    @given(
        st.integers(min_value=-500, max_value=500),
        st.floats(min_value=0.1, max_value=10.0),
    )
    def test_epsilon_nonnegative_and_linear(self, ell, hw):
        cfg = rad.TransitionConfig(electron_state(300.0), ell, 0.0, hw)
        eps = rad.transition_epsilon(cfg)
        assert eps >= 0.0
        signed = rad.transition_epsilon(cfg, signed=True)
        assert abs(signed) == pytest.approx(eps, rel=1e-12)
