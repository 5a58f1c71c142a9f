"""Feasibility analysis for detecting CSL heating of a charged body in a Paul trap."""

from .csl import (
    CslParameters,
    RigidBody,
    Shape,
    body_mass,
    chi,
    chi_argmax,
    chi_cube,
    chi_sphere,
    csl_param_convert,
    energy_raising_rate,
)
from .feasibility import (
    DetectionModel,
    HeatingBudget,
    MapRow,
    MapSpec,
    TrapSizeRule,
    detectability_map,
    detection_energy,
    detection_time,
    heating_budget,
    heating_vs_size_sweep,
    lambda_min,
)
from .noise import (
    ElectricNoiseParams,
    GasEnvironment,
    MagneticNoiseParams,
    MechanicalNoiseParams,
    NoiseParams,
    TrapGeometry,
)

__version__ = "0.1.0"
