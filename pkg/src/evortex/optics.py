"""Paraxial propagation engine and electron-optical elements.

Every element is a pointwise transmission function |T| <= 1 applied in the
plane it lives in (most in the sample/aperture plane; the annular aperture
acts in the diffraction plane). The engine is an angular-spectrum FFT
propagator with an optional raised-cosine absorbing boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial.hermite import hermval

from .kinematics import ElectronState, DomainError, interaction_constant
from .fields import ComplexField2D, Grid, SamplingError


class AliasingError(ValueError):
    """Spectrum carries significant energy near/above the Nyquist band."""


# --------------------------------------------------------------------------
# Elements
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpiralPhasePlate:
    ell_t: float              # topological charge imprinted (may be non-integer)
    stop_radius: float = 0.0  # nm, opaque axial stop

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        r, phi = field.polar()
        t = np.exp(1j * self.ell_t * phi)
        if self.stop_radius > 0:
            t = np.where(r < self.stop_radius, 0.0, t)
        return t


@dataclass(frozen=True)
class MIPPlate:
    """Material plate: phase = C_E * Vbar * d(r)."""

    thickness_map: np.ndarray  # nm, same shape as the field
    mip_volts: float

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        d = np.asarray(self.thickness_map, dtype=float)
        if d.shape != field.samples.shape:
            raise DomainError("thickness map shape must match the field grid")
        c_e = interaction_constant(field.state)
        return np.exp(1j * c_e * self.mip_volts * d)


@dataclass(frozen=True)
class BinaryForkHologram:
    ell0: int
    x_g: float                # fringe period nm
    duty: float = 0.5         # open fraction
    r_max: float = math.inf   # aperture radius nm

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        if self.x_g < 4.0 * field.pitch[0]:
            raise SamplingError(
                f"fork period {self.x_g} nm under 4 pixels at pitch {field.pitch[0]} nm"
            )
        xx, yy = field.meshgrid()
        r = np.hypot(xx, yy)
        phi = np.arctan2(yy, xx)
        k_x = 2.0 * math.pi / self.x_g
        arg = self.ell0 * phi - k_x * xx
        t = (np.cos(arg) > math.cos(math.pi * self.duty)).astype(float)
        return np.where(r <= self.r_max, t, 0.0)


@dataclass(frozen=True)
class PhaseForkHologram:
    ell0: int
    x_g: float
    depth: float = math.pi    # phase depth rad
    blazed: bool = False
    r_max: float = math.inf

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        if self.x_g < 4.0 * field.pitch[0]:
            raise SamplingError("fork period under 4 pixels")
        xx, yy = field.meshgrid()
        r = np.hypot(xx, yy)
        phi = np.arctan2(yy, xx)
        k_x = 2.0 * math.pi / self.x_g
        arg = self.ell0 * phi - k_x * xx
        if self.blazed:
            # linear sawtooth ramp of the chosen depth over each fringe
            frac = (arg / (2.0 * math.pi)) % 1.0
            t = np.exp(1j * self.depth * frac)
        else:
            t = np.exp(1j * self.depth * (np.cos(arg) > 0.0))
        return np.where(r <= self.r_max, t, 0.0)


@dataclass(frozen=True)
class SpiralZonePlate:
    """Binarized spiral zone plate: focusing term + azimuthal charge."""

    ell0: int
    focal_length: float       # nm
    r_max: float = math.inf

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        r, phi = field.polar()
        k = field.state.wavenumber
        arg = self.ell0 * phi - k * r**2 / (2.0 * self.focal_length)
        t = (np.cos(arg) > 0.0).astype(float)
        return np.where(r <= self.r_max, t, 0.0)


@dataclass(frozen=True)
class KnifeEdge:
    """Opaque half-plane whose edge line passes through the axis.

    azimuth is the direction of the edge line; the half-plane to its left
    (positive cross product side) is transmitted.
    """

    azimuth: float = 0.0

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        xx, yy = field.meshgrid()
        left = math.cos(self.azimuth) * yy - math.sin(self.azimuth) * xx
        return (left >= 0.0).astype(float)


@dataclass(frozen=True)
class AnnularAperture:
    """Angle-selective annulus; acts in the diffraction plane (theta = k_perp/k)."""

    theta_inner: float  # mrad
    theta_outer: float  # mrad

    def __post_init__(self):
        if self.theta_inner >= self.theta_outer:
            raise DomainError("annulus bounds inverted")

    def fourier_mask(self, field: ComplexField2D) -> np.ndarray:
        n = field.nx
        kx = 2.0 * math.pi * np.fft.fftshift(np.fft.fftfreq(n, d=field.pitch[0]))
        ky = 2.0 * math.pi * np.fft.fftshift(np.fft.fftfreq(field.ny, d=field.pitch[1]))
        kxx, kyy = np.meshgrid(kx, ky)
        theta = np.hypot(kxx, kyy) / field.state.wavenumber * 1e3  # mrad
        return ((theta >= self.theta_inner) & (theta <= self.theta_outer)).astype(float)


@dataclass(frozen=True)
class AstigmaticLens:
    """Idealized pi/2 mode converter in the HG basis along its axes.

    quadrupole_strength 1.0 = matched converter; 0.0 = identity;
    intermediate values interpolate the HG-basis phase.
    """

    quadrupole_strength: float
    axis_angle: float = 0.0  # rad


@dataclass(frozen=True)
class NeedleMonopole:
    """Magnetized-needle tip: Dirac-phase winding 2*pi*alpha_m with the
    branch cut hidden under the opaque needle shadow."""

    alpha_m: float
    azimuth: float = -math.pi / 2.0
    width: float = 10.0  # nm needle shadow width

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        if self.width < 2.0 * field.pitch[0]:
            raise SamplingError("needle shadow narrower than 2 pixels")
        xx, yy = field.meshgrid()
        phi = np.arctan2(yy, xx)
        # branch cut along the needle azimuth
        rel = (phi - self.azimuth) % (2.0 * math.pi)
        t = np.exp(1j * self.alpha_m * rel)
        # opaque needle: strip of the given width along the azimuth ray
        ex, ey = math.cos(self.azimuth), math.sin(self.azimuth)
        along = xx * ex + yy * ey
        across = -xx * ey + yy * ex
        shadow = (along >= 0.0) & (np.abs(across) <= self.width / 2.0)
        return np.where(shadow, 0.0, t)


@dataclass(frozen=True)
class AberrationVortex:
    """Annular aperture + azimuthal sawtooth phase truncated at 3 harmonics.

    The grid is read as the aperture plane: radius r maps to scattering
    angle theta = r / focal_length.
    """

    theta_inner: float        # mrad
    theta_outer: float        # mrad
    ell: int = 1
    n_harmonics: int = 3      # image shift + 2-fold + 3-fold astigmatism
    focal_length: float = 1e6  # nm

    def __post_init__(self):
        if self.theta_inner >= self.theta_outer:
            raise DomainError("annulus bounds inverted")
        if self.n_harmonics > 3:
            raise DomainError("only aberrations up to 3-fold astigmatism are available")

    def transmission(self, field: ComplexField2D) -> np.ndarray:
        r, phi = field.polar()
        theta = r / self.focal_length * 1e3  # mrad
        chi = np.zeros_like(phi)
        for m in range(1, self.n_harmonics + 1):
            chi += self.ell * 2.0 * (-1.0) ** (m + 1) * np.sin(m * phi) / m
        t = np.exp(1j * chi)
        return np.where((theta >= self.theta_inner) & (theta <= self.theta_outer), t, 0.0)


def apply(element, field: ComplexField2D) -> ComplexField2D:
    """Apply an element to a field (pointwise transmission)."""
    if isinstance(element, AnnularAperture):
        mask = element.fourier_mask(field)
        spec = np.fft.fftshift(np.fft.fft2(field.samples))
        out = np.fft.ifft2(np.fft.ifftshift(spec * mask))
        return field.with_samples(out)
    if isinstance(element, AstigmaticLens):
        raise DomainError("AstigmaticLens is applied through astigmatic_convert")
    return field.with_samples(element.transmission(field) * field.samples)


# --------------------------------------------------------------------------
# Propagation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PropagationPlan:
    method: str = "angular_spectrum"   # or "fresnel_far_field"
    z_step: float | None = None        # nm; None = single step
    absorb_px: int = 32                # raised-cosine absorbing band width
    check_aliasing: bool = False


def _absorber(n: int, width: int) -> np.ndarray:
    if width <= 0:
        return np.ones((n, n))
    edge = np.ones(n)
    ramp = 0.5 * (1.0 - np.cos(math.pi * np.arange(width) / width))
    edge[:width] = ramp
    edge[-width:] = ramp[::-1]
    return np.outer(edge, edge)


def propagate(field: ComplexField2D, distance: float, plan: PropagationPlan | None = None) -> ComplexField2D:
    """Angular-spectrum propagation by `distance` nm.

    Applies the paraxial transfer function exp(-i k_perp^2 z / 2k) in
    Fourier space; unitary up to absorbing-boundary losses.
    """
    plan = plan or PropagationPlan()
    k = field.state.wavenumber
    kx = 2.0 * math.pi * np.fft.fftfreq(field.nx, d=field.pitch[0])
    ky = 2.0 * math.pi * np.fft.fftfreq(field.ny, d=field.pitch[1])
    kxx, kyy = np.meshgrid(kx, ky)
    k2 = kxx**2 + kyy**2

    if plan.check_aliasing:
        spec_power = np.abs(np.fft.fft2(field.samples)) ** 2
        k_nyq = math.pi / field.pitch[0]
        outside = spec_power[np.sqrt(k2) > 0.9 * k_nyq].sum()
        if outside > 1e-6 * spec_power.sum():
            raise AliasingError(
                f"{outside / spec_power.sum():.2e} of spectral power above 0.9 Nyquist"
            )

    n_steps = 1
    dz = distance
    if plan.z_step is not None and abs(distance) > plan.z_step:
        n_steps = int(math.ceil(abs(distance) / plan.z_step))
        dz = distance / n_steps

    absorber = _absorber(field.nx, plan.absorb_px if n_steps > 1 else 0)
    psi = field.samples
    kernel = np.exp(-1j * k2 * dz / (2.0 * k))
    for _ in range(n_steps):
        psi = np.fft.ifft2(np.fft.fft2(psi) * kernel)
        if n_steps > 1:
            psi = psi * absorber
    return replace(field, samples=psi, z=field.z + distance)


def far_field(field: ComplexField2D) -> ComplexField2D:
    """Fraunhofer (back-focal-plane) field: centered unitary FFT.

    The output grid is momentum space with pitch dk = 2*pi/(n*dx) nm^-1.
    """
    out = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(field.samples), norm="ortho"))
    dkx = 2.0 * math.pi / (field.nx * field.pitch[0])
    dky = 2.0 * math.pi / (field.ny * field.pitch[1])
    # continuous-transform scale: keeps Int |Psi(k)|^2 dk^2 = Int |psi|^2 dr^2
    scale = field.pitch[0] * field.pitch[1] * math.sqrt(field.nx * field.ny) / (2.0 * math.pi)
    return replace(field, samples=out * scale, pitch=(dkx, dky), space="fourier")


def fourier_lowpass(field: ComplexField2D, k0: float) -> ComplexField2D:
    """Gaussian low-pass spatial filter exp(-(k_perp/k0)^2) (beam cleaning)."""
    kx = 2.0 * math.pi * np.fft.fftfreq(field.nx, d=field.pitch[0])
    ky = 2.0 * math.pi * np.fft.fftfreq(field.ny, d=field.pitch[1])
    kxx, kyy = np.meshgrid(kx, ky)
    h = np.exp(-(kxx**2 + kyy**2) / k0**2)
    out = np.fft.ifft2(np.fft.fft2(field.samples) * h)
    return field.with_samples(out)


# --------------------------------------------------------------------------
# Designers / composite operations
# --------------------------------------------------------------------------

def design_fork(
    ell0: int,
    x_g: float,
    r_max: float,
    state: ElectronState,
    camera_length: float | None = None,
    duty: float = 0.5,
):
    """Binary fork hologram plus its diffraction-geometry report.

    theta_d = k_x / k; spot separation = L * theta_d for camera length L.
    """
    k_x = 2.0 * math.pi / x_g
    theta_d = k_x / state.wavenumber
    report = {"theta_d_rad": theta_d}
    if camera_length is not None:
        report["camera_length_nm"] = camera_length
        report["separation_nm"] = camera_length * theta_d
    element = BinaryForkHologram(ell0=ell0, x_g=x_g, duty=duty, r_max=r_max)
    return element, report


def camera_length_for(theta_max_rad: float, r_max: float) -> float:
    """Camera length that maps the aperture edge r_max onto angle theta_max."""
    return r_max / theta_max_rad


def aberration_vortex(
    annulus_mrad: tuple[float, float] = (5.7, 8.3),
    ell: int = 1,
    n_harmonics: int = 3,
    focal_length: float = 1e6,
) -> AberrationVortex:
    return AberrationVortex(
        theta_inner=annulus_mrad[0],
        theta_outer=annulus_mrad[1],
        ell=ell,
        n_harmonics=n_harmonics,
        focal_length=focal_length,
    )


def needle_monopole(alpha_m: float, azimuth: float = -math.pi / 2.0, width: float = 10.0) -> NeedleMonopole:
    return NeedleMonopole(alpha_m=alpha_m, azimuth=azimuth, width=width)


# ----- Hermite-Gaussian machinery for the astigmatic converter -------------

def _hg_1d(m: int, u: np.ndarray, w: float) -> np.ndarray:
    """Normalized 1-D Hermite-Gaussian h_m(u), Int h^2 du = 1."""
    coeffs = np.zeros(m + 1)
    coeffs[m] = 1.0
    xi = math.sqrt(2.0) * u / w
    norm = (2.0 / math.pi) ** 0.25 / math.sqrt(2.0**m * math.factorial(m) * w)
    return norm * hermval(xi, coeffs) * np.exp(-(u / w) ** 2)


def astigmatic_convert(
    field: ComplexField2D,
    lens: AstigmaticLens,
    w0: float,
    max_order: int = 14,
) -> ComplexField2D:
    """Ideal pi/2 astigmatic mode conversion matched to waist w0.

    The field is decomposed in the HG basis aligned with the lens axes and
    each HG_{m,n} picks up the converter phase exp(i*s*(n-m)*pi/2) with
    s = quadrupole_strength; HG modes oriented at 45 degrees to the axes
    thereby convert into LG vortex modes with ell = +-(n-m)_diagonal.
    """
    s = lens.quadrupole_strength
    if s == 0.0:
        return field
    xx, yy = field.meshgrid()
    ca, sa = math.cos(lens.axis_angle), math.sin(lens.axis_angle)
    xr = ca * xx + sa * yy
    yr = -sa * xx + ca * yy

    hx = np.stack([_hg_1d(m, xr, w0).ravel() for m in range(max_order + 1)])
    hy = np.stack([_hg_1d(m, yr, w0).ravel() for m in range(max_order + 1)])
    psi = field.samples.ravel()
    area = field.cell_area
    coeffs = (hx * psi) @ hy.T * area             # c_{mn}
    # fractional Gouy phase along the converter's y axis: full converter
    # (s=1) advances each y-index by pi/2, turning HG@45deg into LG
    phases = np.exp(1j * s * math.pi / 2.0 * np.arange(max_order + 1))[None, :]
    out = (hx * ((coeffs * phases) @ hy)).sum(axis=0).reshape(field.samples.shape)
    return field.with_samples(out)
