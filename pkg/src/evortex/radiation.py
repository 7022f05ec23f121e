"""Cherenkov radiation from cone-superposition electrons and the
magnetic-moment observables of transition radiation.

The Cherenkov branch implements the quantum-corrected emission angle, the
plane-wave spectral-angular density (a delta ridge at the emission cone), the
incoherent cone average for a vortex electron (an annular distribution with
exact support), and the petal modulation for a two-component superposition.
The transition-radiation branch implements the magnetic-moment suppression
factor and the left-right interference asymmetry with a pluggable geometry
weight.

Photon energies are in eV; electron energies in keV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import REST_ENERGY_KEV
from .kinematics import ElectronState, DomainError

FINE_STRUCTURE = 7.2973525693e-3

__all__ = [
    "FINE_STRUCTURE",
    "CherenkovConfig",
    "cherenkov_angle",
    "cherenkov_cutoff_ev",
    "CherenkovPlaneWave",
    "cherenkov_planewave",
    "cherenkov_vortex",
    "cherenkov_superposition",
    "TransitionConfig",
    "transition_epsilon",
    "transition_asymmetry",
]


@dataclass(frozen=True)
class CherenkovConfig:
    """Medium plus electron for Cherenkov evaluation.

    ``refractive_index`` is a constant or a callable of the photon energy in
    eV.  ``theta0`` is the opening angle of the cone superposition (radians);
    ``None`` selects the plane-wave branch.
    """

    state: ElectronState
    refractive_index: float | Callable = 1.5
    theta0: float | None = None

    def __post_init__(self):
        if self.theta0 is not None and not 0.0 < self.theta0 < math.pi / 2.0:
            raise DomainError("cone opening angle must lie in (0, pi/2)")

    def index_at(self, photon_energy_ev: float) -> float:
        if callable(self.refractive_index):
            return float(self.refractive_index(photon_energy_ev))
        return float(self.refractive_index)


def _emission_cosine(config: CherenkovConfig, photon_energy_ev: float) -> float:
    n = config.index_at(photon_energy_ev)
    beta = config.state.beta
    e_kev = config.state.total_energy
    hw_kev = photon_energy_ev * 1e-3
    return 1.0 / (beta * n) + (hw_kev / (2.0 * e_kev)) * (n**2 - 1.0) / (beta * n)


def cherenkov_angle(config: CherenkovConfig, photon_energy_ev: float) -> float | None:
    """Emission cone angle with quantum recoil; None below threshold."""
    if photon_energy_ev < 0.0:
        raise DomainError("photon energy must be non-negative")
    n = config.index_at(photon_energy_ev)
    if config.state.beta * n <= 1.0:
        return None
    cos_ch = _emission_cosine(config, photon_energy_ev)
    if cos_ch > 1.0:
        return None  # beyond the spectral cutoff
    return math.acos(cos_ch)


def cherenkov_cutoff_ev(config: CherenkovConfig, photon_energy_ev: float = 0.0) -> float:
    """Photon energy where the emission cosine reaches 1 (spectrum endpoint).

    Evaluated with the refractive index at ``photon_energy_ev`` (dispersion is
    treated as locally constant).
    """
    n = config.index_at(photon_energy_ev)
    beta = config.state.beta
    if beta * n <= 1.0:
        return 0.0
    return 2.0 * config.state.total_energy * 1e3 * (beta * n - 1.0) / (n**2 - 1.0)


def _spectral_bracket(config: CherenkovConfig, photon_energy_ev: float) -> float:
    """beta sin^2(theta_Ch) + quantum term; 0 below threshold or past cutoff."""
    theta = cherenkov_angle(config, photon_energy_ev)
    if theta is None:
        return 0.0
    n = config.index_at(photon_energy_ev)
    beta = config.state.beta
    hw_kev = photon_energy_ev * 1e-3
    e_kev = config.state.total_energy
    return beta * math.sin(theta) ** 2 + hw_kev**2 * (n**2 - 1.0) / (
        2.0 * beta * e_kev**2
    )


def spectral_rate(config: CherenkovConfig, photon_energy_ev: float) -> float:
    """Angle-integrated emission rate density dGamma/d(hbar omega), in units
    of the fine-structure constant: alpha * [beta sin^2 theta_Ch + quantum]."""
    return FINE_STRUCTURE * _spectral_bracket(config, photon_energy_ev)


@dataclass(frozen=True)
class CherenkovPlaneWave:
    photon_energy_ev: np.ndarray
    theta: np.ndarray
    density: np.ndarray          # (n_omega, n_theta) spectral-angular map
    spectral_density: np.ndarray  # closed-form dGamma/d(hbar omega)
    polarization: str = "linear-in-plane"


def cherenkov_planewave(
    config: CherenkovConfig, photon_energy_ev, theta
) -> CherenkovPlaneWave:
    """Plane-wave spectral-angular density with the delta ridge collapsed
    onto one angular cell, normalized so the solid-angle integral reproduces
    the closed-form spectral density."""
    hw = np.atleast_1d(np.asarray(photon_energy_ev, dtype=float))
    theta = np.asarray(theta, dtype=float)
    density = np.zeros((hw.size, theta.size))
    spectral = np.zeros(hw.size)
    cos_edges = np.cos(_cell_edges(theta))
    for i, w in enumerate(hw):
        spectral[i] = spectral_rate(config, w)
        ang = cherenkov_angle(config, w)
        if ang is None:
            continue
        j = int(np.argmin(np.abs(theta - ang)))
        dcos = abs(cos_edges[j] - cos_edges[j + 1])
        # delta(cos t - cos t_Ch) smeared over one cell of the cos-theta mesh
        density[i, j] = (FINE_STRUCTURE / (2.0 * math.pi)) * _spectral_bracket(
            config, w
        ) / dcos
    return CherenkovPlaneWave(hw, theta, density, spectral)


def _cell_edges(theta: np.ndarray) -> np.ndarray:
    mid = 0.5 * (theta[1:] + theta[:-1])
    first = theta[0] - (mid[0] - theta[0])
    last = theta[-1] + (theta[-1] - mid[-1])
    return np.concatenate([[max(first, 0.0)], mid, [min(last, math.pi)]])


def cherenkov_vortex(
    config: CherenkovConfig, photon_energy_ev: float, theta
) -> np.ndarray:
    """Angular density of the cone-averaged emission at one photon energy.

    The incoherent average of the plane-wave delta ridge over the tilted cone
    gives an annulus |theta_Ch - theta0| <= theta <= theta_Ch + theta0 with
    inverse-square-root brightening at both edges:

        dGamma/dw dOmega = (alpha/2pi^2) * bracket
                           / sqrt(sin^2 t sin^2 t0 - (cos t_Ch - cos t cos t0)^2)
    """
    if config.theta0 is None:
        raise DomainError("vortex branch needs a cone opening angle")
    ang = cherenkov_angle(config, photon_energy_ev)
    theta = np.asarray(theta, dtype=float)
    if ang is None:
        return np.zeros_like(theta)
    t0 = config.theta0
    bracket = _spectral_bracket(config, photon_energy_ev)
    disc = (np.sin(theta) * math.sin(t0)) ** 2 - (
        math.cos(ang) - np.cos(theta) * math.cos(t0)
    ) ** 2
    out = np.zeros_like(theta)
    inside = disc > 0.0
    out[inside] = (
        FINE_STRUCTURE / (2.0 * math.pi**2) * bracket / np.sqrt(disc[inside])
    )
    return out


def cherenkov_superposition(
    config: CherenkovConfig,
    jz_pair: tuple,
    amplitudes: tuple,
    photon_energy_ev: float,
    theta,
    phi,
) -> np.ndarray:
    """(theta, phi) map for a two-component total-angular-momentum
    superposition: the annular ring modulated by |Jz1 - Jz2| petals with
    visibility 2|a1 a2| / (|a1|^2 + |a2|^2)."""
    if len(jz_pair) != 2 or len(amplitudes) != 2:
        raise DomainError("superposition branch takes exactly two components")
    a1, a2 = complex(amplitudes[0]), complex(amplitudes[1])
    power = abs(a1) ** 2 + abs(a2) ** 2
    if power == 0.0:
        raise DomainError("superposition amplitudes are both zero")
    delta_j = jz_pair[0] - jz_pair[1]
    if abs(delta_j - round(delta_j)) > 1e-9:
        raise DomainError("total-angular-momentum difference must be integer")
    delta_j = int(round(delta_j))
    visibility = 2.0 * abs(a1 * a2) / power
    phase0 = np.angle(a1 * np.conj(a2))
    ring = cherenkov_vortex(config, photon_energy_ev, theta)
    phi = np.asarray(phi, dtype=float)
    modulation = 1.0 + visibility * np.cos(delta_j * phi[:, None] - phase0)
    return modulation * ring[None, :]


# --------------------------------------------------------------------------
# Transition radiation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionConfig:
    """Electron, winding/spin, photon energy and incidence for the boundary
    radiation observables."""

    state: ElectronState
    ell: int
    spin: float = 0.5
    photon_energy_ev: float = 5.0
    incidence_rad: float = 0.0

    def __post_init__(self):
        if self.photon_energy_ev < 0.0:
            raise DomainError("photon energy must be non-negative")
        if self.spin not in (-0.5, 0.0, 0.5):
            raise DomainError("spin projection must be -1/2, 0 (off) or +1/2")
        if not 0.0 <= self.incidence_rad < math.pi / 2.0:
            raise DomainError("incidence angle must lie in [0, pi/2)")

    @property
    def gamma(self) -> float:
        return self.state.total_energy / REST_ENERGY_KEV

    @property
    def moment_bohr(self) -> float:
        """|M| in Bohr magnetons: |ell + 2 spin| / gamma."""
        return abs(self.ell + 2.0 * self.spin) / self.gamma


def transition_epsilon(config: TransitionConfig, signed: bool = False) -> float:
    """Magnetic-moment-to-charge radiation strength ratio.

    epsilon = M omega / (gamma e c) = |ell + 2 s| hbar omega / (2 gamma^2 m c^2);
    with ``signed`` the moment keeps the sign of (ell + 2 s).
    """
    hw_kev = config.photon_energy_ev * 1e-3
    moment = config.ell + 2.0 * config.spin
    if not signed:
        moment = abs(moment)
    return moment * hw_kev / (2.0 * config.gamma**2 * REST_ENERGY_KEV)


def transition_asymmetry(
    config: TransitionConfig, geometry_factor: float | Callable = 1.0
) -> float:
    """Left-right asymmetry of the charge/magnetic-moment interference.

    I_LR = epsilon_signed * G * sin(incidence): the pseudoscalar geometry
    (photon direction against moment x surface normal) vanishes at normal
    incidence and flips with the sign of the moment.  ``geometry_factor`` is a
    dimensionless O(1-10) model input (a number, or a callable of the
    incidence angle); the closed form for a real metal is not modeled here.
    """
    g = (
        geometry_factor(config.incidence_rad)
        if callable(geometry_factor)
        else float(geometry_factor)
    )
    return transition_epsilon(config, signed=True) * g * math.sin(config.incidence_rad)
