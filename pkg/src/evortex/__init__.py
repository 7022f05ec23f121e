"""evortex: simulation and analysis toolkit for free-electron vortex states."""

__version__ = "0.1.0"

from .kinematics import ElectronState, electron_state, interaction_constant, DomainError
from .fields import (
    ComplexField2D,
    Grid,
    BeamObservables,
    SamplingError,
    density_current,
    observables,
)
from .modes import (
    BesselMode,
    LGMode,
    ApertureLimitedMode,
    ModeSpec,
    synthesize,
    gouy_phase,
)
from . import optics, metrology, magnetics, dirac, scattering, radiation, fieldfile

__all__ = [
    "optics",
    "metrology",
    "magnetics",
    "dirac",
    "scattering",
    "radiation",
    "fieldfile",
    "ElectronState",
    "electron_state",
    "interaction_constant",
    "DomainError",
    "ComplexField2D",
    "Grid",
    "BeamObservables",
    "SamplingError",
    "density_current",
    "observables",
    "BesselMode",
    "LGMode",
    "ApertureLimitedMode",
    "ModeSpec",
    "synthesize",
    "gouy_phase",
]
