"""Relativistic electron kinematics shared by every module.

Unit system: nm / keV / rad / tesla. The electron state exposes both the
kinetic and the total (rest-mass included) energy; callers name which one
they use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import REST_ENERGY_KEV, HBARC_KEV_NM, C_SI


class DomainError(ValueError):
    """Raised when an operation is called outside its physical domain."""


@dataclass(frozen=True)
class ElectronState:
    """Kinematic context of a monoenergetic electron.

    kinetic_energy : keV
    rest_energy    : keV (m_e c^2)
    wavenumber     : nm^-1 (k = p c / hbar c)
    beta           : v/c
    gamma          : Lorentz factor
    total_energy   : keV (kinetic + rest)
    relativistic   : whether the relativistic dispersion was used for k
    """

    kinetic_energy: float
    rest_energy: float
    wavenumber: float
    beta: float
    gamma: float
    total_energy: float
    relativistic: bool = True

    @property
    def wavelength_nm(self) -> float:
        return 2.0 * math.pi / self.wavenumber

    @property
    def momentum_kev(self) -> float:
        """p*c in keV."""
        return self.wavenumber * HBARC_KEV_NM

    @property
    def velocity_m_per_s(self) -> float:
        return self.beta * C_SI


def electron_state(kinetic_energy_kev: float, relativistic: bool = True) -> ElectronState:
    """Build the kinematic state for a given kinetic energy.

    gamma = 1 + T/mc^2, beta = sqrt(1 - 1/gamma^2); the wavenumber follows
    hbar*k*c = sqrt(E^2 - (mc^2)^2) with E the total energy, or the
    non-relativistic E = p^2/2m branch when relativistic=False.
    """
    if kinetic_energy_kev <= 0:
        raise DomainError(f"kinetic energy must be positive, got {kinetic_energy_kev}")
    t = float(kinetic_energy_kev)
    e0 = REST_ENERGY_KEV
    gamma = 1.0 + t / e0
    beta = math.sqrt(1.0 - 1.0 / gamma**2)
    e_tot = t + e0
    if relativistic:
        pc = math.sqrt(e_tot**2 - e0**2)
    else:
        pc = math.sqrt(2.0 * e0 * t)
    k = pc / HBARC_KEV_NM
    return ElectronState(
        kinetic_energy=t,
        rest_energy=e0,
        wavenumber=k,
        beta=beta,
        gamma=gamma,
        total_energy=e_tot,
        relativistic=relativistic,
    )


def interaction_constant(state: ElectronState) -> float:
    """Phase-shift interaction constant C_E in V^-1 nm^-1.

    C_E = k e (E + E0) / (E (E + 2 E0)) with E the kinetic energy; a
    thickness d of material with mean inner potential Vbar shifts the
    transmitted phase by C_E * Vbar * d.
    """
    # Energies in volts so that the result carries 1/V.
    t_v = state.kinetic_energy * 1e3
    e0_v = state.rest_energy * 1e3
    return state.wavenumber * (t_v + e0_v) / (t_v * (t_v + 2.0 * e0_v))
