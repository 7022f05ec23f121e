"""Sampled transverse complex wavefunctions and their observables.

The ComplexField2D is the currency of the propagation engine: a row-major
(n_y, n_x) complex array with a physical pixel pitch in nm, the electron
kinematic state, and the current axial position z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .kinematics import ElectronState, DomainError


class SamplingError(ValueError):
    """Grid cannot resolve the requested structure."""


def _is_pow2(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Square sampling grid description: n x n pixels of pitch nm."""

    n: int
    pitch: float

    def __post_init__(self):
        if not _is_pow2(self.n):
            raise DomainError(f"grid size must be a power of two, got {self.n}")
        if self.pitch <= 0:
            raise DomainError("pitch must be positive")

    @property
    def window(self) -> float:
        return self.n * self.pitch

    def axes(self):
        x = (np.arange(self.n) - self.n // 2) * self.pitch
        return x, x.copy()

    def meshgrid(self):
        x, y = self.axes()
        return np.meshgrid(x, y)

    def polar(self):
        xx, yy = self.meshgrid()
        return np.hypot(xx, yy), np.arctan2(yy, xx)

    def k_axes(self):
        """Centered spatial-frequency axes k = 2*pi*f in nm^-1."""
        k = 2.0 * math.pi * np.fft.fftshift(np.fft.fftfreq(self.n, d=self.pitch))
        return k, k.copy()

    def k_meshgrid(self):
        kx, ky = self.k_axes()
        return np.meshgrid(kx, ky)


@dataclass(frozen=True)
class ComplexField2D:
    """Sampled complex wavefunction psi(x, y) at plane z."""

    samples: np.ndarray          # (n_y, n_x) complex128
    pitch: tuple[float, float]   # (dx, dy) nm (nm^-1 for momentum-space fields)
    state: ElectronState
    z: float = 0.0               # nm
    origin: tuple[float, float] = (0.0, 0.0)
    space: str = "real"          # "real" | "fourier"
    accuracy_warning: str | None = None

    def __post_init__(self):
        s = np.asarray(self.samples)
        ny, nx = s.shape
        if not (_is_pow2(nx) and _is_pow2(ny)):
            raise DomainError(f"field dimensions must be powers of two, got {s.shape}")

    @property
    def nx(self) -> int:
        return self.samples.shape[1]

    @property
    def ny(self) -> int:
        return self.samples.shape[0]

    def axes(self):
        dx, dy = self.pitch
        x = (np.arange(self.nx) - self.nx // 2) * dx + self.origin[0]
        y = (np.arange(self.ny) - self.ny // 2) * dy + self.origin[1]
        return x, y

    def meshgrid(self):
        x, y = self.axes()
        return np.meshgrid(x, y)

    def polar(self):
        xx, yy = self.meshgrid()
        return np.hypot(xx, yy), np.arctan2(yy, xx)

    @property
    def cell_area(self) -> float:
        return self.pitch[0] * self.pitch[1]

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.cell_area)

    def normalized(self) -> "ComplexField2D":
        p = self.total_probability()
        if p == 0.0:
            raise DomainError("cannot normalize a zero field")
        return replace(self, samples=self.samples / math.sqrt(p))

    def with_samples(self, samples: np.ndarray) -> "ComplexField2D":
        return replace(self, samples=samples)


@dataclass(frozen=True)
class BeamObservables:
    """Beam-normalized (per-electron) expectation values."""

    canonical_oam: float                 # <L_z> in hbar
    canonical_oam_circulation: float     # same, from the current circulation
    centroid: tuple[float, float]        # nm
    mean_transverse_momentum: tuple[float, float]  # hbar nm^-1
    extrinsic_oam: float                 # (r x p)_z in hbar
    magnetic_moment: float               # mu_B
    gouy_phase: float | None = None      # rad, only when analytically known
    accuracy_warning: str | None = None


def spectral_gradient(f: ComplexField2D):
    """d(psi)/dx, d(psi)/dy by FFT differentiation (fields are band-limited)."""
    kx = 2.0 * math.pi * np.fft.fftfreq(f.nx, d=f.pitch[0])
    ky = 2.0 * math.pi * np.fft.fftfreq(f.ny, d=f.pitch[1])
    kxx, kyy = np.meshgrid(kx, ky)
    ft = np.fft.fft2(f.samples)
    dpsi_dx = np.fft.ifft2(1j * kxx * ft)
    dpsi_dy = np.fft.ifft2(1j * kyy * ft)
    return dpsi_dx, dpsi_dy


def density_current(f: ComplexField2D):
    """Probability density and transverse current.

    rho = |psi|^2; j = Im(psi* grad psi) in reduced units of hbar/m_e
    (multiply by hbar/m_e to obtain a velocity-weighted density).
    """
    psi = f.samples
    rho = np.abs(psi) ** 2
    dpx, dpy = spectral_gradient(f)
    jx = np.imag(np.conj(psi) * dpx)
    jy = np.imag(np.conj(psi) * dpy)
    return rho, jx, jy


BOUNDARY_LEAK_THRESHOLD = 1e-8


def observables(f: ComplexField2D, gouy_phase: float | None = None) -> BeamObservables:
    """Centroid, momentum, canonical/extrinsic OAM and magnetic moment.

    <L_z> is evaluated two ways: as the expectation of -i*hbar*d/dphi using
    spectral derivatives, and as the circulation m_e * Int(r x j) / Int(rho);
    both are returned so callers can assert their agreement.
    """
    psi = f.samples
    rho, jx, jy = density_current(f)
    norm = float(np.sum(rho))
    if norm == 0.0:
        raise DomainError("zero field has no observables")

    # Boundary-leak accuracy check
    edge = np.concatenate([rho[0, :], rho[-1, :], rho[:, 0], rho[:, -1]])
    warning = f.accuracy_warning
    if edge.max() > BOUNDARY_LEAK_THRESHOLD * rho.max():
        warning = (
            f"boundary leakage {edge.max() / rho.max():.2e} of peak exceeds "
            f"{BOUNDARY_LEAK_THRESHOLD:g}; observables may be window-dependent"
        )

    xx, yy = f.meshgrid()
    # operator definition: L_z = -i hbar (x d/dy - y d/dx)
    dpx, dpy = spectral_gradient(f)
    lz_op = float(np.sum(np.real(np.conj(psi) * (-1j) * (xx * dpy - yy * dpx))) / norm)
    # circulation definition: m_e Int r x j / Int rho  (j already in hbar/m_e)
    lz_circ = float(np.sum(xx * jy - yy * jx) / norm)

    cx = float(np.sum(xx * rho) / norm)
    cy = float(np.sum(yy * rho) / norm)
    px = float(np.sum(jx) / norm)   # <p_x>/hbar = Int Im(psi* dx psi)/Int rho
    py = float(np.sum(jy) / norm)
    extrinsic = cx * py - cy * px

    return BeamObservables(
        canonical_oam=lz_op,
        canonical_oam_circulation=lz_circ,
        centroid=(cx, cy),
        mean_transverse_momentum=(px, py),
        extrinsic_oam=extrinsic,
        magnetic_moment=-lz_op,  # M_z = (e/2 m_e c) <L_z>; electron charge -e => -<L_z>/hbar in mu_B
        gouy_phase=gouy_phase,
        accuracy_warning=warning,
    )
