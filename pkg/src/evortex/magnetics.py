"""Electrons in magnetic fields: Landau states, two kinds of OAM,
rotation dynamics, and classical trajectory checks.

Unit conventions: transverse lengths nm, B in tesla, frequencies rad/s,
energies keV. The trajectory integrators work internally in SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.special import genlaguerre

from .constants import (
    REST_ENERGY_KEV,
    HBARC_KEV_NM,
    E_CHARGE_SI,
    M_E_SI,
    HBAR_SI,
)
from .kinematics import ElectronState, DomainError
from .fields import ComplexField2D, Grid, SamplingError, density_current
from .modes import LGMode, ModeSpec, synthesize

KEV_J = 1.602176634e-16  # J per keV


class ConsistencyError(RuntimeError):
    """Closed-form result and its numeric cross-check disagree."""


class StabilityError(ValueError):
    """Integrator step too large for the fastest frequency present."""


# --------------------------------------------------------------------------
# Environment and Landau specs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MagneticEnvironment:
    """Uniform axial magnetic field B z-hat and its derived scales.

    omega_larmor is the signed Larmor frequency entering the Zeeman energy
    E_Z = -hbar*Omega_L*ell; it carries the opposite sign to the field
    (electron charge is negative), so omega_larmor = -sigma*|Omega_L|.
    The observable rotation sense of beams and trajectories is +sigma.
    """

    b_tesla: float
    mass_kg: float
    state: ElectronState

    def __post_init__(self):
        if self.b_tesla == 0.0:
            raise DomainError("magnetic environment requires B != 0")

    @property
    def sigma(self) -> int:
        return 1 if self.b_tesla > 0 else -1

    @property
    def abs_larmor(self) -> float:
        """|Omega_L| = |e|B/2m [rad/s]."""
        return E_CHARGE_SI * abs(self.b_tesla) / (2.0 * self.mass_kg)

    @property
    def omega_larmor(self) -> float:
        return -self.sigma * self.abs_larmor

    @property
    def omega_cyclotron(self) -> float:
        return 2.0 * self.omega_larmor

    @property
    def w_m(self) -> float:
        """Magnetic length 2*sqrt(hbar/|e|B) [nm]."""
        return 2.0 * math.sqrt(HBAR_SI / (E_CHARGE_SI * abs(self.b_tesla))) * 1e9

    @property
    def z_m(self) -> float:
        """Larmor length v/|Omega_L| [nm], v = sqrt(2E/m)."""
        v = math.sqrt(2.0 * self.state.kinetic_energy * KEV_J / self.mass_kg)
        return v / self.abs_larmor * 1e9


def magnetic_environment(
    b_tesla: float, state: ElectronState, relativistic_mass: bool = False
) -> MagneticEnvironment:
    mass = M_E_SI * (state.gamma if relativistic_mass else 1.0)
    return MagneticEnvironment(b_tesla=b_tesla, mass_kg=mass, state=state)


@dataclass(frozen=True)
class LandauSpec:
    ell: int
    n: int
    k_z: float  # nm^-1
    env: MagneticEnvironment

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("radial index must be >= 0")

    @property
    def landau_index(self) -> int:
        """N_L = n + |ell|(1+sgn(sigma*ell))/2, a non-negative integer."""
        s = self.env.sigma * self.ell
        return self.n + (abs(self.ell) if s > 0 else 0)


# --------------------------------------------------------------------------
# Landau eigenfields and their currents
# --------------------------------------------------------------------------

def landau_field(spec: LandauSpec, grid: Grid) -> ComplexField2D:
    """Non-diffracting LG-profile eigenmode of width w_m (z-independent)."""
    w_m = spec.env.w_m
    need = 6.0 * w_m * math.sqrt(spec.n + abs(spec.ell) + 1)
    if grid.window < need:
        raise SamplingError(
            f"grid window {grid.window} nm below {need:.1f} nm for this Landau mode"
        )
    return synthesize(
        ModeSpec.single(LGMode(w_m, spec.ell, spec.n)), grid, spec.env.state
    )


def kinetic_current(spec: LandauSpec, field: ComplexField2D):
    """(rho, jx, jy) including the vector-potential term, hbar/m_e nm^-1 units.

    j_phi = (hbar/m)[ell/r + sigma*2r/w_m^2] * rho; for sigma*ell < 0 the
    azimuthal current changes sign at r = w_m*sqrt(|ell|/2) (the ring
    radius of the mode).
    """
    rho, jx, jy = density_current(field)
    xx, yy = field.meshgrid()
    coef = spec.env.sigma * 2.0 / spec.env.w_m**2
    jx = jx - coef * yy * rho
    jy = jy + coef * xx * rho
    return rho, jx, jy


def landau_energies(spec: LandauSpec):
    """(E_par, E_Z, E_G, E_perp, N_L); energies in keV.

    E_Z = -hbar*Omega_L*ell (signed Larmor), E_G = hbar|Omega_L|(2n+|ell|+1),
    E_perp = E_Z + E_G = hbar|Omega_L|(2N_L+1).
    """
    hw = HBAR_SI * spec.env.abs_larmor / KEV_J  # hbar|Omega_L| in keV
    e_par = (HBARC_KEV_NM * spec.k_z) ** 2 / (2.0 * REST_ENERGY_KEV)
    e_zeeman = hw * spec.env.sigma * spec.ell  # = -hbar*Omega_L*ell
    e_gouy = hw * (2 * spec.n + abs(spec.ell) + 1)
    n_l = spec.landau_index
    e_perp = hw * (2 * n_l + 1)
    return e_par, e_zeeman, e_gouy, e_perp, n_l


def _default_grid(spec: LandauSpec) -> Grid:
    window = 8.0 * spec.env.w_m * math.sqrt(spec.n + abs(spec.ell) + 2)
    return Grid(512, window / 512)


def kinetic_oam(spec: LandauSpec, grid: Grid | None = None, cross_check: bool = True) -> float:
    """<L_z^kin> = hbar[ell + sigma(2n+|ell|+1)] = hbar*sigma(2N_L+1) [hbar].

    The closed form is cross-checked against the grid quadrature of
    m_e Int r x j / Int rho using the gauge-covariant current.
    """
    closed = spec.ell + spec.env.sigma * (2 * spec.n + abs(spec.ell) + 1)
    if cross_check:
        field = landau_field(spec, grid or _default_grid(spec))
        rho, jx, jy = kinetic_current(spec, field)
        xx, yy = field.meshgrid()
        numeric = float((xx * jy - yy * jx).sum() / rho.sum())
        if abs(numeric - closed) > 5e-3 * max(1.0, abs(closed)):
            raise ConsistencyError(
                f"grid kinetic OAM {numeric} vs closed form {closed}"
            )
    return float(closed)


def lzg_phase(spec: LandauSpec, z: float):
    """(phase [rad], dk_z [nm^-1]) of the combined Zeeman-Gouy propagation.

    dk_z = -[sigma*ell + (2n+|ell|+1)]/z_m.
    """
    dkz = -(spec.env.sigma * spec.ell + (2 * spec.n + abs(spec.ell) + 1)) / spec.env.z_m
    return dkz * z, dkz


def propagate_superposition(components, z: float, grid: Grid) -> ComplexField2D:
    """Coherent Landau-mode sum with each component's propagation phase."""
    if not components:
        raise DomainError("empty superposition")
    env0 = components[0][0].env
    for spec, _ in components:
        if spec.env is not env0 and (
            spec.env.b_tesla != env0.b_tesla or spec.env.mass_kg != env0.mass_kg
        ):
            raise DomainError("all components must share one magnetic environment")
    total = None
    for spec, amp in components:
        f = landau_field(spec, grid)
        phase, _ = lzg_phase(spec, z)
        term = amp * np.exp(1j * phase) * f.samples
        total = term if total is None else total + term
    out = ComplexField2D(
        samples=total, pitch=(grid.pitch, grid.pitch), state=env0.state, z=z
    )
    return out.normalized()


def pattern_angle(field: ComplexField2D, harmonic: int, n_phi: int = 512) -> float:
    """Orientation of a |harmonic|-fold intensity pattern, in (-pi/m, pi/m].

    Radially integrated azimuthal Fourier coefficient c_m of the intensity;
    the pattern maxima sit at phi = -arg(c_m)/m.
    """
    if harmonic == 0:
        raise DomainError("pattern angle undefined for a round pattern")
    inten = np.abs(field.samples) ** 2
    n = field.nx
    dx, dy = field.pitch
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    radii = np.linspace(0.0, (n // 2 - 2) * dx, 128, endpoint=False)
    rr, pp = np.meshgrid(radii, phi, indexing="ij")
    xi = n // 2 + rr * np.cos(pp) / dx
    yi = n // 2 + rr * np.sin(pp) / dy
    rings = ndimage.map_coordinates(inten, [yi, xi], order=1, mode="constant")
    weighted = (rings * radii[:, None]).sum(axis=0)
    c_m = (weighted * np.exp(-1j * harmonic * phi)).sum()
    return float(-np.angle(c_m) / harmonic)


def pattern_rotation_slope(components, z_values, grid: Grid) -> float:
    """d(pattern angle)/dz [rad/nm] for a two-mode Landau superposition.

    The angle is tracked by the phase of the interference harmonic
    m = ell_1 - ell_2, unwrapped along z, then fit linearly.
    """
    if len(components) != 2:
        raise DomainError("rotation slope is defined for two-mode superpositions")
    m = components[0][0].ell - components[1][0].ell
    if m == 0:
        raise DomainError("components share the same vortex charge")
    angles = []
    for z in z_values:
        f = propagate_superposition(components, float(z), grid)
        angles.append(pattern_angle(f, m))
    # unwrap modulo the 2pi/m pattern symmetry
    wrapped = np.unwrap(np.asarray(angles) * m) / m
    slope, _ = np.polyfit(np.asarray(z_values, dtype=float), wrapped, 1)
    return float(slope)


def mean_angular_velocity(spec: LandauSpec, cross_check: bool = True) -> float:
    """Density-averaged rotation rate <Omega> [rad/s], sign = rotation sense.

    Branches: 0 for sigma*ell < 0, sigma*|Omega_L| for ell = 0,
    2*sigma*|Omega_L| for sigma*ell > 0. Cross-checked by the radial
    quadrature of Omega(r) = j_phi/(r*rho) over the mode density.
    """
    s = spec.env.sigma
    if spec.ell == 0:
        branch = 1
    elif s * spec.ell > 0:
        branch = 2
    else:
        branch = 0
    closed = s * branch * spec.env.abs_larmor
    if cross_check:
        w = spec.env.w_m
        r = np.linspace(1e-6 * w, 8.0 * w, 20000)
        u = 2.0 * r**2 / w**2
        lag = genlaguerre(spec.n, abs(spec.ell))(u)
        rho = u ** abs(spec.ell) * lag**2 * np.exp(-u)
        # Omega(r) = (hbar/m)[ell/r^2 + 2 sigma/w^2], lengths in nm
        omega_r = (HBAR_SI / spec.env.mass_kg) * 1e18 * (
            spec.ell / r**2 + 2.0 * s / w**2
        )
        numeric = float(
            np.trapezoid(omega_r * rho * r, r) / np.trapezoid(rho * r, r)
        )
        scale = max(spec.env.abs_larmor, abs(closed))
        if abs(numeric - closed) > 1e-2 * scale:
            raise ConsistencyError(
                f"numeric <Omega> {numeric:.6e} vs closed form {closed:.6e}"
            )
    return closed


# --------------------------------------------------------------------------
# Semiclassical trajectories
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray  # s, shape (n,)
    r: np.ndarray  # m, shape (n, 3)
    p: np.ndarray  # kg m/s, shape (n, 3)
    L: np.ndarray  # intrinsic OAM direction vector (arb. units), shape (n, 3)


def integrate_semiclassical(
    r0,
    p0,
    l0,
    e_field=(0.0, 0.0, 0.0),
    b_field=(0.0, 0.0, 0.0),
    duration: float = 1e-9,
    step: float = 1e-12,
) -> Trajectory:
    """Fixed-step RK4 wave-packet centroid motion with OAM transport (SI).

    dp/dt = -e(E + v x B);  dL/dt = (omega_E + omega_B) x L with
    omega_E = (p x (-eE))/p^2 (rigid rotation with the momentum direction,
    conserving the orbital helicity L.p/|p|) and omega_B = (e/2m)B (Larmor
    precession). In uniform B the momentum precesses at Omega_c = 2 Omega_L.
    """
    e_vec = np.asarray(e_field, dtype=float)
    b_vec = np.asarray(b_field, dtype=float)
    b_mag = float(np.linalg.norm(b_vec))
    if b_mag > 0.0:
        t_c = 2.0 * math.pi * M_E_SI / (E_CHARGE_SI * b_mag)
        if step > t_c / 200.0:
            raise StabilityError(
                f"step {step:.3e} s exceeds T_c/200 = {t_c / 200:.3e} s"
            )
    q = -E_CHARGE_SI
    omega_b = (E_CHARGE_SI / (2.0 * M_E_SI)) * b_vec

    def deriv(state):
        r, p, l_vec = state[:3], state[3:6], state[6:9]
        v = p / M_E_SI
        force = q * (e_vec + np.cross(v, b_vec))
        p2 = float(p @ p)
        omega = np.cross(p, q * e_vec) / p2 + omega_b
        return np.concatenate([v, force, np.cross(omega, l_vec)])

    n_steps = max(1, int(round(duration / step)))
    h = duration / n_steps
    y = np.concatenate([
        np.asarray(r0, dtype=float),
        np.asarray(p0, dtype=float),
        np.asarray(l0, dtype=float),
    ])
    out = np.empty((n_steps + 1, 9))
    out[0] = y
    for i in range(n_steps):
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * h * k1)
        k3 = deriv(y + 0.5 * h * k2)
        k4 = deriv(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    t = np.arange(n_steps + 1) * h
    return Trajectory(t=t, r=out[:, :3], p=out[:, 3:6], L=out[:, 6:9])


def fit_rotation_rate(t: np.ndarray, xy: np.ndarray) -> float:
    """Signed angular rate [rad/s] of a rotating 2-vector time series."""
    ang = np.unwrap(np.arctan2(xy[:, 1], xy[:, 0]))
    slope, _ = np.polyfit(t, ang, 1)
    return float(slope)


# --------------------------------------------------------------------------
# Magnetic monopole flux line
# --------------------------------------------------------------------------

def monopole_oam_shift(ell_in: float, alpha_m: float) -> float:
    """OAM after passing a monopole of flux parameter alpha_m: ell + alpha_m."""
    return ell_in + alpha_m


def monopole_azimuthal_kick(
    alpha_m: float,
    r0_nm: float,
    speed: float = 1e8,
    span_factor: float = 400.0,
) -> float:
    """Classical azimuthal momentum gained past a monopole, in hbar/r0 units.

    Integrates the Lorentz force in B = g r/|r|^3 with g = hbar*alpha_m/2e
    along a trajectory of impact parameter r0; the analytic gain is
    alpha_m * hbar/r0 independent of speed.
    """
    from scipy.integrate import solve_ivp

    if r0_nm <= 0:
        raise DomainError("impact parameter must be positive")
    # polarity chosen so a positive alpha_m adds positive azimuthal momentum,
    # matching the ell -> ell + alpha_m shift rule for the negative electron
    g = -HBAR_SI * alpha_m / (2.0 * E_CHARGE_SI)  # T m^2
    r0 = r0_nm * 1e-9
    q = -E_CHARGE_SI
    z_span = span_factor * r0

    def rhs(_t, y):
        r, v = y[:3], y[3:]
        rn = float(np.linalg.norm(r))
        if rn < 1e-3 * r0:
            raise DomainError("trajectory approaches the monopole; increase r0")
        b = g * r / rn**3
        acc = (q / M_E_SI) * np.cross(v, b)
        return np.concatenate([v, acc])

    y0 = np.array([r0, 0.0, -z_span, 0.0, 0.0, speed])
    sol = solve_ivp(
        rhs,
        (0.0, 2.0 * z_span / speed),
        y0,
        method="DOP853",
        rtol=1e-11,
        atol=1e-30,
        dense_output=False,
    )
    r_f, v_f = sol.y[:3, -1], sol.y[3:, -1]
    # azimuthal unit vector at the exit point
    phi_hat = np.array([-r_f[1], r_f[0], 0.0])
    phi_hat /= np.linalg.norm(phi_hat[:2])
    dp_phi = M_E_SI * float(v_f @ phi_hat)
    return dp_phi * r0 / HBAR_SI
