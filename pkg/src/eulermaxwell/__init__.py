"""One-dimensional Euler-Maxwell solver with classical and asymptotic-preserving schemes."""
from .boundary import BoundaryConditionSpec, IncidentWave, apply_em_bc, apply_fluid_bc, incident_wave
from .kernels import backend_name
from .model import (
    DENSITY_FLOOR,
    EMField,
    FluidState,
    Grid1D,
    PressureLaw,
    ScalingUnits,
    SchemeConfig,
    compute_scaling,
    face_average,
    gauss_residual,
    pressure_eval,
    sound_speed,
)
from .onefluid import OneFluidSnapshot, init_ex_from_gauss, step_ap, step_classical
from .twofluid import TwoFluidSnapshot, init_ex_from_gauss_2f, step_ap_2f, step_classical_2f

__all__ = [
    "BoundaryConditionSpec", "IncidentWave", "apply_em_bc", "apply_fluid_bc", "incident_wave", "backend_name",
    "DENSITY_FLOOR", "EMField", "FluidState", "Grid1D", "PressureLaw", "ScalingUnits", "SchemeConfig",
    "compute_scaling", "face_average", "gauss_residual", "pressure_eval", "sound_speed",
    "OneFluidSnapshot", "init_ex_from_gauss", "step_ap", "step_classical",
    "TwoFluidSnapshot", "init_ex_from_gauss_2f", "step_ap_2f", "step_classical_2f",
]

__version__ = "0.1.0"
