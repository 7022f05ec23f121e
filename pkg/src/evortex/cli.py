"""Command-line driver: scenario runners, CSV/figure export, manifests.

Each subcommand reads a JSON configuration, validates it strictly (unknown
keys rejected; physical quantities must carry unit-suffixed names), runs the
corresponding scenario, and writes artifacts into the output directory
together with a ``manifest.json`` listing every file with its SHA-256 hash.
``verify`` runs the cross-module consistency oracles and prints a pass/fail
table.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import (
    BesselMode,
    LGMode,
    ApertureLimitedMode,
    ModeSpec,
    ComplexField2D,
    Grid,
    DomainError,
    SamplingError,
    electron_state,
    interaction_constant,
    observables,
    synthesize,
)
from . import optics, metrology, magnetics, dirac, scattering, radiation
from .fieldfile import write_field


# --------------------------------------------------------------------------
# Config validation
# --------------------------------------------------------------------------

#: keys that are dimensionless by nature and need no unit suffix
_UNITLESS = {
    "mode",
    "ell",
    "ell0",
    "n_radial",
    "grid_n",
    "edge_taper",
    "duty",
    "kind",
    "elements",
    "illumination",
    "far_field",
    "seed",
    "spin",
    "alpha",
    "refractive_index",
    "kappa_over_k",
    "spin_basis",
    "field_sign",
    "jz_pair",
    "amplitudes_re",
    "branch",
    "methods",
    "geometry_factor",
    "axis_points",
}

_UNIT_SUFFIXES = (
    "_kev",
    "_ev",
    "_nm",
    "_per_nm",
    "_rad",
    "_mrad",
    "_deg",
    "_tesla",
    "_s",
    "_ns",
)

_SCENARIO_KEYS = {
    "mode-synthesis": {
        "required": {"mode", "ell", "energy_kev", "grid_n", "pitch_nm"},
        "optional": {"kappa_per_nm", "waist_nm", "n_radial", "kappa_max_per_nm", "edge_taper", "seed"},
    },
    "optics-pipeline": {
        "required": {"illumination", "energy_kev", "grid_n", "pitch_nm", "elements"},
        "optional": {"far_field", "seed"},
    },
    "metrology": {
        "required": {"ell", "energy_kev", "waist_nm", "grid_n", "pitch_nm"},
        "optional": {"seed"},
    },
    "landau": {
        "required": {"b_tesla", "ell", "energy_kev"},
        "optional": {"n_radial", "field_sign", "seed"},
    },
    "dirac": {
        "required": {"momentum_kev", "kappa_over_k", "ell", "spin"},
        "optional": {"spin_basis", "seed"},
    },
    "scattering": {
        "required": {"alpha"},
        "optional": {"kappa1_kev", "kappa2_kev", "ell1", "ell2", "axis_points", "k_span_kev", "seed"},
    },
    "radiation": {
        "required": {"branch", "energy_kev", "photon_energy_ev"},
        "optional": {
            "refractive_index",
            "theta0_rad",
            "jz_pair",
            "amplitudes_re",
            "ell",
            "spin",
            "incidence_deg",
            "geometry_factor",
            "seed",
        },
    },
}
_SCENARIO_KEYS["scattering"]["optional"] |= {"ell1", "ell2"}


def _validate_keys(config: dict, scenario: str) -> None:
    spec = _SCENARIO_KEYS[scenario]
    allowed = spec["required"] | spec["optional"]
    for key in config:
        if key in allowed:
            continue
        suffixed = [a for a in allowed if a.startswith(key + "_")]
        if suffixed:
            raise click.ClickException(
                f"config key '{key}': missing unit suffix (did you mean "
                f"{' or '.join(sorted(suffixed))}?)"
            )
        raise click.ClickException(f"config key '{key}': unknown key for {scenario}")
    missing = spec["required"] - set(config)
    if missing:
        raise click.ClickException(
            f"missing required config keys: {', '.join(sorted(missing))}"
        )
    for key, value in config.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            continue
        if key in _UNITLESS or key.endswith(_UNIT_SUFFIXES):
            continue
        raise click.ClickException(f"config key '{key}': missing unit suffix")


def _load_config(path: str, scenario: str) -> dict:
    try:
        config = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    if not isinstance(config, dict):
        raise click.ClickException(f"{path}: top level must be a JSON object")
    _validate_keys(config, scenario)
    return config


# --------------------------------------------------------------------------
# Artifact helpers
# --------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path: Path, header, rows) -> Path:
    """RFC-4180 CSV with LF endings and f64 round-trip precision."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def _save_intensity_figure(path: Path, field: ComplexField2D, title: str) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    extent = [field.axes()[0][0], field.axes()[0][-1], field.axes()[1][0], field.axes()[1][-1]]
    axes[0].imshow(np.abs(field.samples) ** 2, origin="lower", extent=extent, cmap="inferno")
    axes[0].set_title(f"{title}: intensity")
    axes[1].imshow(np.angle(field.samples), origin="lower", extent=extent, cmap="twilight")
    axes[1].set_title("phase")
    for ax in axes:
        ax.set_xlabel("x (nm)")
        ax.set_ylabel("y (nm)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _save_map_figure(path: Path, data: np.ndarray, extent, title: str, labels) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 4.6))
    im = ax.imshow(data, origin="lower", extent=extent, cmap="viridis", aspect="auto")
    ax.set_title(title)
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_manifest(outdir: Path, files, config: dict, scenario: str) -> Path:
    entries = {}
    for f in sorted(files, key=lambda p: p.name):
        entries[f.name] = hashlib.sha256(f.read_bytes()).hexdigest()
    manifest = {
        "scenario": scenario,
        "seed": config.get("seed"),
        "artifacts": entries,
    }
    path = outdir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _run_scenario(scenario: str, config_path: str, output_dir: str, figures: bool, runner):
    config = _load_config(config_path, scenario)
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        files = runner(config, outdir, figures)
    except (DomainError, SamplingError, optics.AliasingError,
            metrology.MeasurementError, metrology.LayoutError,
            magnetics.ConsistencyError, magnetics.StabilityError) as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}")
    write_manifest(outdir, files, config, scenario)
    click.echo(f"{scenario}: wrote {len(files)} artifacts to {outdir}")


# --------------------------------------------------------------------------
# Scenario runners
# --------------------------------------------------------------------------


def _build_mode(config) -> ModeSpec:
    kind = config["mode"]
    ell = int(config["ell"])
    if kind == "bessel":
        mode = BesselMode(kappa=float(config["kappa_per_nm"]), ell=ell)
    elif kind == "lg":
        mode = LGMode(w0=float(config["waist_nm"]), ell=ell, n=int(config.get("n_radial", 0)))
    elif kind == "aperture":
        mode = ApertureLimitedMode(kappa_max=float(config["kappa_max_per_nm"]), ell=ell)
    else:
        raise DomainError(f"unknown mode kind '{kind}'")
    return ModeSpec.single(mode)


def run_mode_synthesis(config: dict, outdir: Path, figures: bool):
    state = electron_state(float(config["energy_kev"]))
    grid = Grid(int(config["grid_n"]), float(config["pitch_nm"]))
    spec = _build_mode(config)
    field = synthesize(spec, grid, state, edge_taper=float(config.get("edge_taper", 0.25)))
    obs = observables(field)
    files = [
        write_field(
            outdir / "field.evf",
            field,
            energy_kev=float(config["energy_kev"]),
            provenance="mode-synthesis",
            parameters={k: v for k, v in config.items() if k != "seed"},
        )
    ]
    files.append((outdir / "field.evf.json"))
    files.append(
        write_csv(
            outdir / "observables.csv",
            ["quantity", "value", "unit"],
            [
                ("canonical_oam", obs.canonical_oam, "hbar"),
                ("canonical_oam_circulation", obs.canonical_oam_circulation, "hbar"),
                ("centroid_x", obs.centroid[0], "nm"),
                ("centroid_y", obs.centroid[1], "nm"),
                ("magnetic_moment", obs.magnetic_moment, "mu_B"),
            ],
        )
    )
    if figures:
        files.append(_save_intensity_figure(outdir / "field.png", field, config["mode"]))
    return files


_ELEMENT_BUILDERS = {
    "binary-fork": lambda p: optics.BinaryForkHologram(
        ell0=int(p["ell0"]), x_g=float(p["period_nm"]),
        duty=float(p.get("duty", 0.5)), r_max=float(p.get("r_max_nm", math.inf)),
    ),
    "spiral-plate": lambda p: optics.SpiralPhasePlate(ell_t=float(p["ell"])),
    "knife-edge": lambda p: optics.KnifeEdge(azimuth=float(p.get("azimuth_rad", 0.0))),
}


def run_optics_pipeline(config: dict, outdir: Path, figures: bool):
    state = electron_state(float(config["energy_kev"]))
    n = int(config["grid_n"])
    pitch = float(config["pitch_nm"])
    grid = Grid(n, pitch)
    illum = config["illumination"]
    xx, yy = grid.meshgrid()
    if illum["kind"] == "plane":
        samples = np.ones((n, n), dtype=complex)
    elif illum["kind"] == "gaussian":
        w = float(illum["waist_nm"])
        samples = np.exp(-((np.hypot(xx, yy) / w) ** 2)).astype(complex)
    else:
        raise DomainError(f"unknown illumination kind '{illum['kind']}'")
    field = ComplexField2D(samples=samples, pitch=(pitch, pitch), state=state).normalized()
    fork_period = None
    fork_ell0 = None
    for params in config["elements"]:
        kind = params.get("kind")
        if kind not in _ELEMENT_BUILDERS:
            raise DomainError(f"unknown element kind '{kind}'")
        element = _ELEMENT_BUILDERS[kind](params)
        if kind == "binary-fork":
            fork_period = float(params["period_nm"])
            fork_ell0 = int(params["ell0"])
        field = optics.apply(element, field)
    if config.get("far_field", True):
        field = optics.far_field(field)
    files = [
        write_field(
            outdir / "field.evf",
            field,
            energy_kev=float(config["energy_kev"]),
            provenance="optics-pipeline",
            parameters={k: v for k, v in config.items() if k != "seed"},
        ),
        outdir / "field.evf.json",
    ]
    rows = []
    if fork_period is not None and config.get("far_field", True):
        k_x = 2.0 * math.pi / fork_period
        total = field.total_probability()
        for order in (-3, -1, 0, 1, 3):
            axis = (-order * k_x, 0.0)
            spec = metrology.azimuthal_decompose(
                field, axis=axis, ell_max=8, n_r=64, r_max=0.45 * k_x
            )
            # power inside the analysis disc around this order
            kxg, kyg = field.meshgrid()
            mask = np.hypot(kxg - axis[0], kyg - axis[1]) <= 0.45 * k_x
            power = float((np.abs(field.samples[mask]) ** 2).sum() * field.cell_area)
            rows.append(
                (order, spec.dominant(), power / total, order * fork_ell0)
            )
        files.append(
            write_csv(
                outdir / "orders.csv",
                ["order", "measured_charge", "power_fraction", "expected_charge"],
                rows,
            )
        )
    if figures:
        files.append(_save_intensity_figure(outdir / "field.png", field, "pipeline output"))
    return files


def run_metrology(config: dict, outdir: Path, figures: bool):
    state = electron_state(float(config["energy_kev"]))
    grid = Grid(int(config["grid_n"]), float(config["pitch_nm"]))
    ell = int(config["ell"])
    w0 = float(config["waist_nm"])
    field = synthesize(ModeSpec.single(LGMode(w0=w0, ell=ell)), grid, state)
    spec = metrology.azimuthal_decompose(field)
    tri_abs, tri_sign = metrology.triangular_aperture_count(
        field, metrology.TriangleAperture(side=4.5 * w0)
    )
    along, _ = metrology.knife_edge_shift(field)
    knife_sign = 0 if abs(along) < 1e-12 else (-1 if along > 0 else 1)
    ast_abs, ast_sign = metrology.astigmatic_lobes(field, w0=w0)
    rows = [
        ("azimuthal_decomposition", spec.dominant()),
        ("triangular_aperture", tri_sign * tri_abs),
        ("knife_edge_sign", knife_sign),
        ("astigmatic_lobes", ast_sign * ast_abs),
    ]
    files = [write_csv(outdir / "readouts.csv", ["method", "charge"], rows)]
    if figures:
        files.append(_save_intensity_figure(outdir / "probe.png", field, f"charge {ell}"))
    return files


def run_landau(config: dict, outdir: Path, figures: bool):
    env = magnetics.magnetic_environment(
        float(config["b_tesla"]), electron_state(float(config["energy_kev"]))
    )
    spec = magnetics.LandauSpec(
        ell=int(config["ell"]), n=int(config.get("n_radial", 0)), k_z=0.0, env=env
    )
    oam = magnetics.kinetic_oam(spec)
    e_par, e_z, e_g, e_perp, n_l = magnetics.landau_energies(spec)
    rows = [
        ("kinetic_oam", oam, "hbar"),
        ("magnetic_width", env.w_m, "nm"),
        ("rotation_distance", env.z_m, "nm"),
        ("zeeman_energy", e_z, "kev"),
        ("gouy_energy", e_g, "kev"),
        ("transverse_energy", e_perp, "kev"),
        ("landau_index", n_l, "1"),
    ]
    files = [write_csv(outdir / "landau.csv", ["quantity", "value", "unit"], rows)]
    if figures:
        window = 8.0 * env.w_m * math.sqrt(spec.n + abs(spec.ell) + 2.0)
        field = magnetics.landau_field(spec, Grid(512, window / 512))
        files.append(_save_intensity_figure(outdir / "landau.png", field, "confined state"))
    return files


def run_dirac(config: dict, outdir: Path, figures: bool):
    basis = config.get("spin_basis", "fixed")
    kwargs = {"s": float(config["spin"])} if basis == "fixed" else {"chi": float(config["spin"])}
    spec = dirac.dirac_spec(
        float(config["momentum_kev"]), float(config["kappa_over_k"]), int(config["ell"]), **kwargs
    )
    lam = dirac.soi_parameter(spec)
    rows = [("coupling_parameter", lam, "1")]
    if basis == "fixed":
        l_z, s_z, m_z = dirac.sam_oam_expectations(spec, cross_check=False)
        rows += [
            ("orbital_angular_momentum", l_z, "hbar"),
            ("spin_angular_momentum", s_z, "hbar"),
            ("total_angular_momentum", l_z + s_z, "hbar"),
            ("magnetic_moment", m_z, "mu_B"),
        ]
    files = [write_csv(outdir / "dirac.csv", ["quantity", "value", "unit"], rows)]
    if figures:
        grid = Grid(256, math.pi / (5.0 * spec.kappa))
        f = dirac.dirac_bessel(spec, grid)
        fig, ax = plt.subplots(figsize=(5, 4.4))
        x = grid.axes()[0]
        ax.imshow(f.density(), origin="lower", extent=[x[0], x[-1], x[0], x[-1]], cmap="inferno")
        ax.set_title("spinor probability density")
        ax.set_xlabel("x (nm)")
        ax.set_ylabel("y (nm)")
        fig.tight_layout()
        fig.savefig(outdir / "density.png", dpi=120)
        plt.close(fig)
        files.append(outdir / "density.png")
    return files


def run_scattering(config: dict, outdir: Path, figures: bool):
    alpha = float(config["alpha"])
    beam1 = scattering.VortexBeam(float(config.get("kappa1_kev", 200.0)), int(config.get("ell1", 0)))
    beam2 = scattering.VortexBeam(float(config.get("kappa2_kev", 100.0)), int(config.get("ell2", 6)))
    phase = None if alpha == 0.0 else (lambda th: scattering.coulomb_phase(th, alpha))
    setup = scattering.CollisionSetup(beam1, beam2, phase=phase)
    span = float(config.get("k_span_kev", 320.0))
    n = int(config.get("axis_points", 161))
    k_axis = np.linspace(-span, span, n)
    dist = scattering.vortex_vortex_distribution(setup, k_axis)
    lo = abs(beam1.kappa_kev - beam2.kappa_kev)
    hi = beam1.kappa_kev + beam2.kappa_kev
    rows = []
    for i, ky in enumerate(k_axis):
        for j, kx in enumerate(k_axis):
            rows.append((kx, ky, dist[i, j]))
    files = [
        write_csv(outdir / "distribution.csv", ["K_x_kev", "K_y_kev", "dsigma"], rows),
        write_csv(
            outdir / "asymmetry.csv",
            ["quantity", "value"],
            [
                ("updown_asymmetry", scattering.updown_asymmetry(dist, k_axis)),
                ("fringe_asymmetry", scattering.fringe_asymmetry(dist, k_axis, lo, hi)),
            ],
        ),
        write_field(
            outdir / "distribution.evf",
            dist.astype(complex),
            pitch=(float(k_axis[1] - k_axis[0]),) * 2,
            energy_kev=beam1.energy_kev,
            provenance="scattering",
            parameters={k: v for k, v in config.items() if k != "seed"},
        ),
        outdir / "distribution.evf.json",
    ]
    if figures:
        files.append(
            _save_map_figure(
                outdir / "distribution.png",
                dist,
                [k_axis[0], k_axis[-1], k_axis[0], k_axis[-1]],
                "two-cone collision distribution",
                ("K_x (keV)", "K_y (keV)"),
            )
        )
    return files


def run_radiation(config: dict, outdir: Path, figures: bool):
    state = electron_state(float(config["energy_kev"]))
    hw = float(config["photon_energy_ev"])
    branch = config["branch"]
    files = []
    if branch == "cherenkov":
        cfg = radiation.CherenkovConfig(
            state,
            float(config.get("refractive_index", 1.5)),
            theta0=config.get("theta0_rad"),
        )
        thetas = np.linspace(0.0, math.pi / 2, 400)
        phis = np.linspace(0.0, 2.0 * math.pi, 180, endpoint=False)
        if cfg.theta0 is None:
            pw = radiation.cherenkov_planewave(cfg, [hw], thetas)
            intensity = np.tile(pw.density[0], (phis.size, 1))
        elif "jz_pair" in config:
            amps = config.get("amplitudes_re", [1.0, 1.0])
            intensity = radiation.cherenkov_superposition(
                cfg, tuple(config["jz_pair"]), tuple(amps), hw, thetas, phis
            )
        else:
            intensity = np.tile(radiation.cherenkov_vortex(cfg, hw, thetas), (phis.size, 1))
        rows = []
        for i, phi in enumerate(phis):
            for j, theta in enumerate(thetas):
                rows.append((theta, phi, intensity[i, j]))
        files.append(
            write_csv(outdir / "angular_map.csv", ["theta_rad", "phi_rad", "intensity"], rows)
        )
        if figures:
            files.append(
                _save_map_figure(
                    outdir / "angular_map.png",
                    intensity,
                    [0.0, math.pi / 2, 0.0, 2.0 * math.pi],
                    "emission map",
                    ("theta (rad)", "phi (rad)"),
                )
            )
    elif branch == "transition":
        cfg = radiation.TransitionConfig(
            state,
            int(config.get("ell", 0)),
            float(config.get("spin", 0.5)),
            hw,
            math.radians(float(config.get("incidence_deg", 0.0))),
        )
        g = float(config.get("geometry_factor", 1.0))
        files.append(
            write_csv(
                outdir / "transition.csv",
                ["quantity", "value"],
                [
                    ("moment_suppression", radiation.transition_epsilon(cfg)),
                    ("left_right_asymmetry", radiation.transition_asymmetry(cfg, g)),
                    ("magnetic_moment_bohr", cfg.moment_bohr),
                ],
            )
        )
    else:
        raise DomainError(f"unknown radiation branch '{branch}'")
    return files


# --------------------------------------------------------------------------
# Consistency oracles (verify)
# --------------------------------------------------------------------------


def _oracle_dual_oam():
    state = electron_state(200.0)
    field = synthesize(
        ModeSpec.single(BesselMode(kappa=0.05, ell=2)), Grid(512, 4.0), state,
        edge_taper=0.25,
    )
    obs = observables(field)
    err = abs(obs.canonical_oam - obs.canonical_oam_circulation)
    return err < 1e-6, f"operator/circulation split {err:.2e} hbar"

def _oracle_interaction_constant():
    c_e = interaction_constant(electron_state(200.0))
    return abs(c_e / 0.0072884 - 1.0) < 5e-3, f"C_E(200 keV) = {c_e:.6f} /V/nm"

def _oracle_kinetic_oam():
    env = magnetics.magnetic_environment(2.0, electron_state(200.0))
    spec = magnetics.LandauSpec(ell=2, n=1, k_z=0.0, env=env)
    value = magnetics.kinetic_oam(spec)  # raises ConsistencyError on mismatch
    return abs(value - 7.0) < 0.05, f"confined-state OAM = {value:.4f} hbar (closed form 7)"

def _oracle_dirac_jz():
    spec = dirac.dirac_spec(2.4 * 510.9989, 0.7, 1, s=0.5)
    l_z, s_z, _ = dirac.sam_oam_expectations(spec)  # grid cross-check inside
    return abs(l_z + s_z - 1.5) < 1e-9, f"J_z = {l_z + s_z:.9f} (exact 1.5)"

def _oracle_cherenkov_rate():
    gamma = 1.0 / math.sqrt(1.0 - 0.8**2)
    cfg = radiation.CherenkovConfig(
        electron_state(510.9989 * (gamma - 1.0)), 1.5, theta0=0.3
    )
    thc = radiation.cherenkov_angle(cfg, 2.0)
    x_lo, x_hi = math.cos(thc + 0.3), math.cos(abs(thc - 0.3))
    n = 4096
    x = 0.5 * (x_hi + x_lo) + 0.5 * (x_hi - x_lo) * np.cos((np.arange(n) + 0.5) * math.pi / n)
    vals = radiation.cherenkov_vortex(cfg, 2.0, np.arccos(x))
    w = (math.pi / n) * np.sqrt(np.maximum((x_hi - x) * (x - x_lo), 0.0))
    rate = 2.0 * math.pi * (vals * w).sum()
    rel = abs(rate / radiation.spectral_rate(cfg, 2.0) - 1.0)
    return rel < 5e-3, f"cone-average vs closed-form rate split {rel:.2e}"


ORACLES = [
    ("dual OAM definitions", _oracle_dual_oam),
    ("interaction constant", _oracle_interaction_constant),
    ("confined-state kinetic OAM", _oracle_kinetic_oam),
    ("spinor J_z additivity", _oracle_dirac_jz),
    ("cone-averaged emission rate", _oracle_cherenkov_rate),
]


# --------------------------------------------------------------------------
# Click entry points
# --------------------------------------------------------------------------


@click.group()
def main():
    """Vortex-beam simulation scenarios."""


def _scenario_command(name, runner):
    @main.command(name=name)
    @click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
    @click.option("--output-dir", "-o", default="out", show_default=True)
    @click.option("--no-figures", is_flag=True, help="Skip PNG rendering.")
    def command(config_path, output_dir, no_figures):
        _run_scenario(name, config_path, output_dir, not no_figures, runner)

    command.__name__ = name.replace("-", "_")
    return command


_scenario_command("mode-synthesis", run_mode_synthesis)
_scenario_command("optics-pipeline", run_optics_pipeline)
_scenario_command("metrology", run_metrology)
_scenario_command("landau", run_landau)
_scenario_command("dirac", run_dirac)
_scenario_command("scattering", run_scattering)
_scenario_command("radiation", run_radiation)


@main.command()
def verify():
    """Run the cross-module consistency oracles and print a pass/fail table."""
    failures = 0
    for label, oracle in ORACLES:
        try:
            ok, detail = oracle()
        except Exception as exc:  # an oracle blowing up is a failure, not a crash
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        click.echo(f"{status}  {label:32s} {detail}")
    if failures:
        raise click.ClickException(f"{failures} oracle(s) failed")
    click.echo("all oracles passed")


if __name__ == "__main__":
    sys.exit(main())
