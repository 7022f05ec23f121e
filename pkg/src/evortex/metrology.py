"""OAM measurement procedures and spiral-phase imaging.

All readouts operate on ComplexField2D values (typically far fields from
the optics module) and cross-check each other on pure modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import ndimage

from .kinematics import DomainError
from .fields import ComplexField2D, density_current, spectral_gradient
from . import optics


class MeasurementError(RuntimeError):
    """Readout could not produce an unambiguous result."""


class LayoutError(ValueError):
    """Interferometer layout produces overlapping autocorrelation peaks."""


@dataclass(frozen=True)
class OamSpectrum:
    """Power fraction per azimuthal quantum number about a chosen axis."""

    weights: dict            # ell -> weight, normalized over the window
    mean_lz: float           # hbar
    axis: tuple[float, float] = (0.0, 0.0)
    out_of_range: float = 0.0
    modulo: int | None = None  # set when the readout only resolves ell mod n

    def weight(self, ell: int) -> float:
        return self.weights.get(ell, 0.0)

    def dominant(self) -> int:
        return max(self.weights, key=self.weights.get)


@dataclass(frozen=True)
class MpiLayout:
    n_pinholes: int
    circle_radius: float   # nm
    pinhole_diameter: float  # nm

    def __post_init__(self):
        # non-overlapping pinholes
        gap = 2.0 * self.circle_radius * math.sin(math.pi / self.n_pinholes)
        if self.pinhole_diameter >= gap:
            raise DomainError("pinholes overlap")

    def centers(self):
        ang = 2.0 * math.pi * np.arange(self.n_pinholes) / self.n_pinholes
        return np.stack([self.circle_radius * np.cos(ang), self.circle_radius * np.sin(ang)], axis=1)


def _polar_samples(f: ComplexField2D, axis, n_phi: int, radii):
    """Bilinear resampling of the complex field onto rings around `axis`."""
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    dx, dy = f.pitch
    cx = f.nx // 2 + (axis[0] - f.origin[0]) / dx
    cy = f.ny // 2 + (axis[1] - f.origin[1]) / dy
    rr, pp = np.meshgrid(radii, phi, indexing="ij")
    xi = cx + rr * np.cos(pp) / dx
    yi = cy + rr * np.sin(pp) / dy
    re = ndimage.map_coordinates(f.samples.real, [yi, xi], order=1, mode="constant")
    im = ndimage.map_coordinates(f.samples.imag, [yi, xi], order=1, mode="constant")
    return re + 1j * im  # shape (n_r, n_phi)


def azimuthal_decompose(
    f: ComplexField2D,
    axis: tuple[float, float] = (0.0, 0.0),
    ell_max: int = 16,
    n_phi: int = 256,
    n_r: int = 256,
    r_max: float | None = None,
) -> OamSpectrum:
    """Radially integrated azimuthal Fourier power spectrum about `axis`.

    r_max bounds the analysis rings (useful to isolate one diffraction
    order); default is the largest full ring inside the grid.
    """
    if ell_max > n_phi // 4:
        raise DomainError("ell_max exceeds a quarter of the ring sampling")
    x, y = f.axes()
    r_edge = min(
        axis[0] - x[0], x[-1] - axis[0], axis[1] - y[0], y[-1] - axis[1]
    )
    if r_max is not None:
        r_edge = min(r_edge, r_max)
    if r_edge <= 4 * f.pitch[0]:
        raise DomainError("axis too close to the grid boundary")
    radii = np.linspace(0.0, r_edge, n_r, endpoint=False)
    rings = _polar_samples(f, axis, n_phi, radii)
    harmonics = np.fft.fft(rings, axis=1) / n_phi  # c_ell(r) at ell = fft freqs
    power = np.abs(harmonics) ** 2 * radii[:, None]
    per_ell = power.sum(axis=0)
    total = per_ell.sum()
    if total == 0.0:
        raise MeasurementError("no power inside the analysis window")
    ells = np.fft.fftfreq(n_phi, d=1.0 / n_phi).astype(int)
    in_window = np.abs(ells) <= ell_max
    in_total = per_ell[in_window].sum()
    weights = {int(l): float(p / in_total) for l, p in zip(ells[in_window], per_ell[in_window])}
    mean = sum(l * w for l, w in weights.items())
    return OamSpectrum(
        weights=weights,
        mean_lz=mean,
        axis=axis,
        out_of_range=float(1.0 - in_total / total),
    )


def fork_readout(
    f: ComplexField2D,
    probe_fork: "optics.BinaryForkHologram",
    orders=(-3, -1, 0, 1, 3),
    with_confidence: bool = False,
):
    """Topological charge from which fork diffraction order lacks the doughnut.

    The order with maximal on-axis intensity is the non-vortex one; the
    input charge is then -N*ell0 for that order N. When no order cancels
    the vortex (e.g. the matching order is an even one suppressed by the
    binary grating), the readout falls back to interpolating the doughnut
    radius versus order and reports reduced confidence.
    """
    out = optics.far_field(optics.apply(probe_fork, f))
    k_x = 2.0 * math.pi / probe_fork.x_g
    dk = out.pitch[0]
    c = out.nx // 2
    half_win = max(2, int(round(k_x / dk / 2.5)))
    on_axis = {}
    doughnut_radius = {}
    ky = (np.arange(out.ny) - out.ny // 2) * out.pitch[1]
    for n_order in orders:
        # order N carries the e^{-i N k_x x} grating factor -> k = -N k_x
        ipx = int(round(c - n_order * k_x / dk))
        patch = np.abs(out.samples[c - half_win : c + half_win + 1,
                                   ipx - half_win : ipx + half_win + 1]) ** 2
        # axial concentration relative to the order's own power, so weak
        # high orders compete fairly with the bright first orders
        on_axis[n_order] = float(
            patch[half_win - 1 : half_win + 2, half_win - 1 : half_win + 2].mean()
            / max(patch.mean(), 1e-300)
        )
        kxx, kyy = np.meshgrid(
            (np.arange(2 * half_win + 1) - half_win) * dk,
            (np.arange(2 * half_win + 1) - half_win) * out.pitch[1],
        )
        rr = np.hypot(kxx, kyy)
        doughnut_radius[n_order] = float((rr * patch).sum() / patch.sum())
    ranked = sorted(on_axis.items(), key=lambda kv: -kv[1])
    if ranked[1][1] <= 0.9 * ranked[0][1]:
        charge = -ranked[0][0] * probe_fork.ell0
        return (charge, "normal") if with_confidence else charge
    # fallback: doughnut radius grows ~ |l + N*l0|; a quadratic fit in N
    # puts its vertex at N0 = -l/l0
    ns = np.array(sorted(doughnut_radius))
    rs = np.array([doughnut_radius[n] ** 2 for n in ns])
    a, b, _ = np.polyfit(ns, rs, 2)
    if a <= 0:
        raise MeasurementError("fork readout ambiguous and radius fit degenerate")
    n0 = -b / (2.0 * a)
    charge = int(round(-n0 * probe_fork.ell0))
    return (charge, "reduced") if with_confidence else charge


@dataclass(frozen=True)
class TriangleAperture:
    side: float  # nm, equilateral, centered on the axis, one side horizontal (bottom)

    def transmission(self, f: ComplexField2D) -> np.ndarray:
        xx, yy = f.meshgrid()
        h = self.side * math.sqrt(3.0) / 2.0
        # vertices at top (0, 2h/3), bottom corners (+-side/2, -h/3)
        y0 = -h / 3.0
        inside = (yy >= y0)
        # two slanted sides
        inside &= (yy <= 2.0 * h / 3.0 - math.sqrt(3.0) * xx)
        inside &= (yy <= 2.0 * h / 3.0 + math.sqrt(3.0) * xx)
        return inside.astype(float)


def _padded_far_intensity(f: ComplexField2D, pad_factor: int = 4) -> np.ndarray:
    """|FFT|^2 of the field zero-padded pad_factor x per side.

    Padding refines the far-field sampling so that neighboring lattice
    spots of small-aperture diffraction patterns stay resolved.
    """
    n = f.nx * pad_factor
    big = np.zeros((n, n), dtype=complex)
    lo = (n - f.nx) // 2
    big[lo:lo + f.ny, lo:lo + f.nx] = f.samples
    ff = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(big), norm="ortho"))
    return np.abs(ff) ** 2


def _spot_count(intensity: np.ndarray, smooth_px: float = 2.0, rel_threshold: float = 0.25) -> int:
    sm = ndimage.gaussian_filter(intensity, smooth_px)
    mx = ndimage.maximum_filter(sm, size=5)
    peaks = (sm == mx) & (sm > rel_threshold * sm.max())
    labels, n = ndimage.label(peaks)
    return n


def triangular_aperture_count(f: ComplexField2D, triangle: TriangleAperture):
    """(|ell|, sign) from the far-field triangular spot lattice.

    The lattice has (|l|+1)(|l|+2)/2 spots, |l|+1 per side; the sign follows
    from the lattice orientation, read out by correlating against an
    internally simulated +|l| reference and its mirror image.
    """
    masked = f.with_samples(triangle.transmission(f) * f.samples)
    inten = _padded_far_intensity(masked)
    n_spots = _spot_count(inten)
    # invert s(s+1)/2 = n_spots
    side = int(round((math.sqrt(8.0 * n_spots + 1.0) - 1.0) / 2.0))
    if side * (side + 1) // 2 != n_spots:
        raise MeasurementError(f"spot count {n_spots} is not triangular")
    abs_ell = side - 1
    if abs_ell == 0:
        return 0, 0
    # sign via reference correlation
    from .modes import synthesize, ModeSpec, LGMode
    from .fields import Grid

    grid = Grid(f.nx, f.pitch[0])
    ref = synthesize(ModeSpec.single(LGMode(_beam_width(f) / math.sqrt(2), abs_ell, 0)), grid, f.state)
    ref_i = _padded_far_intensity(ref.with_samples(triangle.transmission(ref) * ref.samples))
    corr_plus = float(np.sum(inten * ref_i))
    # the triangle is x-mirror symmetric, so the -|l| lattice is the
    # x-mirrored +|l| lattice
    corr_minus = float(np.sum(inten * ref_i[:, ::-1]))
    sign = 1 if corr_plus >= corr_minus else -1
    return abs_ell, sign


def _beam_width(f: ComplexField2D) -> float:
    rho = np.abs(f.samples) ** 2
    xx, yy = f.meshgrid()
    r2 = float(np.sum((xx**2 + yy**2) * rho) / np.sum(rho))
    return math.sqrt(r2)


def knife_edge_shift(f: ComplexField2D, edge_azimuth: float = 0.0):
    """Far-field centroid displacement after a half-plane cut.

    Returns (along_edge, along_normal) centroid components in the edge
    frame (nm^-1). The C-shaped half-beam carries net transverse momentum
    along the edge direction whose sign encodes the vortex chirality:
    along_edge = -sgn(l)*|shift|; a non-vortex beam only spreads along the
    edge normal with zero centroid displacement.
    """
    cut = optics.apply(optics.KnifeEdge(azimuth=edge_azimuth), f)
    ff = optics.far_field(cut)
    inten = np.abs(ff.samples) ** 2
    kxx, kyy = ff.meshgrid()
    total = inten.sum()
    cx = float((kxx * inten).sum() / total)
    cy = float((kyy * inten).sum() / total)
    ca, sa = math.cos(edge_azimuth), math.sin(edge_azimuth)
    along_edge = ca * cx + sa * cy
    along_normal = -sa * cx + ca * cy
    return along_edge, along_normal


def astigmatic_lobes(f: ComplexField2D, quadrupole_strength: float = 1.0, w0: float | None = None):
    """(|ell|, sign) from the converted two-axis lobe pattern.

    A matched converter turns LG_l into an HG-like pattern of |l|+1 lobes
    along a diagonal; which diagonal carries the lobes gives sgn(l).
    """
    if not (0.5 <= quadrupole_strength <= 1.0):
        raise MeasurementError("quadrupole strength outside the matching window")
    w0 = w0 or _beam_width(f)
    lens = optics.AstigmaticLens(quadrupole_strength=1.0, axis_angle=0.0)
    conv = optics.astigmatic_convert(f, lens, w0=w0)
    inten = np.abs(conv.samples) ** 2
    # sample along the two diagonals
    n = f.nx
    idx = np.arange(n)
    diag_plus = inten[idx, idx]              # y = x   (+45 deg)
    diag_minus = inten[idx[::-1], idx]       # y = -x  (-45 deg)
    p_plus, p_minus = float(diag_plus.sum()), float(diag_minus.sum())
    if max(p_plus, p_minus) < 1.25 * min(p_plus, p_minus):
        # no preferred diagonal: round pattern, ell = 0
        if _line_lobe_count(diag_plus) == 1 and _line_lobe_count(diag_minus) == 1:
            return 0, 0
        raise MeasurementError("lobes unresolved")
    if p_minus > p_plus:
        lobes = _line_lobe_count(diag_minus)
        sign = 1   # LG(+l) converts to HG lobes along the -45 deg diagonal
    else:
        lobes = _line_lobe_count(diag_plus)
        sign = -1
    if lobes < 2:
        raise MeasurementError("lobes unresolved")
    return lobes - 1, sign


def _line_lobe_count(profile: np.ndarray, rel_threshold: float = 0.2) -> int:
    sm = ndimage.gaussian_filter1d(profile, 2.0)
    thr = rel_threshold * sm.max()
    count = 0
    for i in range(1, len(sm) - 1):
        if sm[i] > thr and sm[i] >= sm[i - 1] and sm[i] > sm[i + 1]:
            count += 1
    return count


def mpi_spectrum(f: ComplexField2D, layout: MpiLayout, ell_max: int | None = None) -> OamSpectrum:
    """OAM spectrum modulo n from a multi-pinhole interferogram.

    The far-field intensity is inverse-transformed (Wiener-Khinchin) into
    the field autocorrelation; its values at the known pinhole separation
    vectors recover psi_i psi_j*, whose circular power spectrum is the OAM
    content of the ring samples, ambiguous modulo n_pinholes.
    """
    n = layout.n_pinholes
    centers = layout.centers()
    # check autocorrelation peaks are separated by > pinhole diameter
    seps = centers[:, None, :] - centers[None, :, :]
    flat = seps.reshape(-1, 2)
    for a in range(len(flat)):
        for b in range(a + 1, len(flat)):
            d = math.hypot(*(flat[a] - flat[b]))
            if 0 < d < layout.pinhole_diameter:
                raise LayoutError("autocorrelation peaks overlap for this layout")

    # pinhole mask
    xx, yy = f.meshgrid()
    mask = np.zeros(f.samples.shape)
    radius = layout.pinhole_diameter / 2.0
    for cx, cy in centers:
        mask += ((xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2).astype(float)
    masked = f.with_samples(np.clip(mask, 0, 1) * f.samples)

    ff = optics.far_field(masked)
    inten = np.abs(ff.samples) ** 2
    # autocorrelation of the pinhole-plane field
    auto = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(inten)))
    dx, dy = f.pitch

    def sample_auto(vec):
        px = f.nx // 2 + vec[0] / dx
        py = f.ny // 2 + vec[1] / dy
        re = ndimage.map_coordinates(auto.real, [[py], [px]], order=1)[0]
        im = ndimage.map_coordinates(auto.imag, [[py], [px]], order=1)[0]
        return re + 1j * im

    corr = np.zeros(n, dtype=complex)  # g(m) = sum_i psi_i psi_{i+m}*
    for m in range(n):
        acc = 0.0 + 0.0j
        for i in range(n):
            acc += sample_auto(centers[i] - centers[(i + m) % n])
        corr[m] = acc
    # circular power spectrum: w(l) proportional to sum_m g(m) e^{+2pi i l m / n}
    ells = np.arange(n)
    # w(l) ~ sum_m g(m) e^{+2pi i l m/n}; g(-m)=g*(m) makes it real
    spec = np.real(np.fft.ifft(corr) * n)
    spec = np.maximum(spec, 0.0)
    spec = spec / spec.sum()
    # map to centered residues
    weights = {}
    for l, w in zip(ells, spec):
        lc = int(l if l <= n // 2 else l - n)
        weights[lc] = float(w)
    mean = sum(l * w for l, w in weights.items())
    return OamSpectrum(weights=weights, mean_lz=mean, modulo=n)


def spiral_phase_images(exit_wave: ComplexField2D, central_stop_px: int = 3):
    """Spiral-phase-plate image pair and their sum/difference maps.

    rho_plus/minus are the intensities after multiplying the back focal
    plane by e^{+-i phi_k} (central stop zeroed); to one global constant,
    sum ~ |grad psi0|^2 and diff ~ curl of the transverse current.
    """
    spec = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(exit_wave.samples)))
    n = exit_wave.nx
    kx = np.arange(n) - n // 2
    kxx, kyy = np.meshgrid(kx, kx)
    kr = np.hypot(kxx, kyy)
    phi_k = np.arctan2(kyy, kxx)
    stop = (kr > central_stop_px).astype(float)
    out = {}
    for sgn in (+1, -1):
        filt = spec * stop * np.exp(1j * sgn * phi_k)
        img = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(filt)))
        out[sgn] = np.abs(img) ** 2
    return out[+1], out[-1], out[+1] + out[-1], out[+1] - out[-1]


def source_size_blur(intensity: np.ndarray, sigma_nm: float, pitch_nm: float) -> np.ndarray:
    """Incoherent source-size blur: Gaussian convolution of the intensity."""
    if sigma_nm < 0:
        raise DomainError("sigma must be >= 0")
    if sigma_nm == 0:
        return intensity.copy()
    return ndimage.gaussian_filter(intensity, sigma_nm / pitch_nm, mode="constant")
