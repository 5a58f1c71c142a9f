"""Physical constants (CODATA 2018, SI) and reference material values."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    # CSL couples to mass in units of the nucleon mass; the atomic mass unit is used
    nucleon_mass_u: float = 1.66053906660e-27  # kg
    boltzmann_kB: float = 1.380649e-23  # J/K
    elementary_charge: float = 1.602176634e-19  # C
    vacuum_permittivity_eps0: float = 8.8541878128e-12  # F/m
    bohr_magneton: float = 9.2740100783e-24  # J/T
    atomic_mass_unit: float = 1.66053906660e-27  # kg


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
NUCLEON_MASS = CONSTANTS.nucleon_mass_u
K_B = CONSTANTS.boltzmann_kB
E_CHARGE = CONSTANTS.elementary_charge
EPS0 = CONSTANTS.vacuum_permittivity_eps0
MU_B = CONSTANTS.bohr_magneton
AMU = CONSTANTS.atomic_mass_unit

OSMIUM_DENSITY = 22587.0  # kg/m^3
HELIUM_MASS = 4.002602 * AMU
HYDROGEN_MOLECULE_MASS = 2.01588 * AMU

# Reference scenario: singly charged osmium sphere, radius 0.238 um
REFERENCE_RADIUS = 0.238e-6  # m

GRW_LAMBDA = 1e-16  # 1/s
GRW_RC = 1e-7  # m
