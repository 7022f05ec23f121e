"""Bit-exact binary container for sampled complex fields.

Layout (little-endian), magic "EVF1":

    offset 0   4 bytes  magic b"EVF1"
    offset 4   u32      n_x
    offset 8   u32      n_y
    offset 12  f64      dx_nm
    offset 20  f64      dy_nm
    offset 28  u32      n_components
    offset 32  payload  n_components * n_y * n_x * (f64 re, f64 im) row-major

A JSON sidecar (same path + ".json") carries the physical metadata and is
validated against SIDECAR_SCHEMA.  Multi-component (spinor) fields store the
component index as the leading axis.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
import jsonschema

from .kinematics import DomainError, electron_state
from .fields import ComplexField2D

MAGIC = b"EVF1"
HEADER = struct.Struct("<4sIIddI")  # 32 bytes

SIDECAR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "energy_kev", "z_nm", "provenance"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": "EVF1"},
        "energy_kev": {"type": "number", "exclusiveMinimum": 0},
        "z_nm": {"type": "number"},
        "provenance": {"type": "string"},
        "parameters": {"type": "object"},
        "component_labels": {
            "type": "array",
            "items": {"type": "string"},
        },
    },
}

__all__ = ["MAGIC", "SIDECAR_SCHEMA", "write_field", "read_field", "FieldFile"]


class FieldFile:
    """Read result: samples (n_components, n_y, n_x), pitch, and sidecar."""

    def __init__(self, samples: np.ndarray, pitch: tuple, sidecar: dict):
        self.samples = samples
        self.pitch = pitch
        self.sidecar = sidecar

    @property
    def n_components(self) -> int:
        return self.samples.shape[0]

    def as_field(self, component: int = 0) -> ComplexField2D:
        state = electron_state(self.sidecar["energy_kev"])
        return ComplexField2D(
            samples=np.ascontiguousarray(self.samples[component]),
            pitch=self.pitch,
            state=state,
            z=self.sidecar["z_nm"],
        )


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_field(
    path,
    samples,
    pitch=None,
    energy_kev: float = None,
    z_nm: float = 0.0,
    provenance: str = "",
    parameters: dict | None = None,
    component_labels=None,
) -> Path:
    """Write samples (a field object or an (n_c, n_y, n_x) array) plus sidecar."""
    path = Path(path)
    if isinstance(samples, ComplexField2D):
        pitch = samples.pitch
        data = samples.samples[None, :, :]
    else:
        data = np.asarray(samples, dtype=complex)
        if data.ndim == 2:
            data = data[None, :, :]
        if data.ndim != 3:
            raise DomainError("samples must be (n_y, n_x) or (n_c, n_y, n_x)")
        if pitch is None:
            raise DomainError("pitch required for bare sample arrays")
    if energy_kev is None or energy_kev <= 0.0:
        raise DomainError("energy_kev required and positive")
    n_c, n_y, n_x = data.shape
    interleaved = np.empty((n_c, n_y, n_x, 2), dtype="<f8")
    interleaved[..., 0] = data.real
    interleaved[..., 1] = data.imag
    header = HEADER.pack(MAGIC, n_x, n_y, float(pitch[0]), float(pitch[1]), n_c)
    path.write_bytes(header + interleaved.tobytes(order="C"))
    sidecar = {
        "format": "EVF1",
        "energy_kev": float(energy_kev),
        "z_nm": float(z_nm),
        "provenance": provenance,
        "parameters": parameters or {},
    }
    if component_labels is not None:
        sidecar["component_labels"] = list(component_labels)
    jsonschema.validate(sidecar, SIDECAR_SCHEMA)
    _sidecar_path(path).write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )
    return path


def read_field(path) -> FieldFile:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < HEADER.size:
        raise DomainError(f"{path}: truncated header")
    magic, n_x, n_y, dx, dy, n_c = HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise DomainError(f"{path}: bad magic {magic!r}")
    expected = HEADER.size + n_c * n_y * n_x * 16
    if len(raw) != expected:
        raise DomainError(
            f"{path}: payload length {len(raw)} != expected {expected}"
        )
    flat = np.frombuffer(raw, dtype="<f8", offset=HEADER.size)
    pairs = flat.reshape(n_c, n_y, n_x, 2)
    samples = pairs[..., 0] + 1j * pairs[..., 1]
    sidecar_file = _sidecar_path(path)
    if not sidecar_file.exists():
        raise DomainError(f"{path}: missing sidecar {sidecar_file.name}")
    sidecar = json.loads(sidecar_file.read_text())
    jsonschema.validate(sidecar, SIDECAR_SCHEMA)
    return FieldFile(samples=samples, pitch=(dx, dy), sidecar=sidecar)
