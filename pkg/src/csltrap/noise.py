"""Environmental noise spectra and their conversion into heating rates.

All heating rates are mean energy gain per unit time (W) of one motional
axis of the trapped body. Spectra are one-sided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import EPS0, HELIUM_MASS, K_B
from .csl import RigidBody, Shape
from .errors import DomainError, UnsupportedShapeError


@dataclass(frozen=True)
class TrapGeometry:
    d: float = 0.01  # electrode surface to trap centre, m
    V_Q: float = 20.0  # static quadrupole voltage, V
    V_AC: float = 300.0  # rf amplitude, V
    Omega_AC: float = 2 * math.pi * 10.0  # rf drive, rad/s
    kappa: float = 2.0  # geometric efficiency of the static quadrupole

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError(f"trap d must be positive, got {self.d}")
        if not self.V_Q > 0:
            raise DomainError(f"trap V_Q must be positive, got {self.V_Q}")
        if not self.kappa > 0:
            raise DomainError(f"trap kappa must be positive, got {self.kappa}")
        if self.V_AC < 0 or self.Omega_AC < 0:
            raise DomainError("rf amplitude and frequency must be >= 0")

    def with_d(self, d: float) -> TrapGeometry:
        return TrapGeometry(d, self.V_Q, self.V_AC, self.Omega_AC, self.kappa)


@dataclass(frozen=True)
class MechanicalNoiseParams:
    """Electrode displacement spectrum S_x(f) = a1^2 f^-5 + a2^2/(f0^20 + f^20) + a3^2/f."""

    a1: float = 1.5e-15
    a2: float = 1500e-15
    a3: float = 0.0006e-15
    f0: float = 0.65

    def __post_init__(self):
        if min(self.a1, self.a2, self.a3) < 0:
            raise DomainError("mechanical noise coefficients must be >= 0")
        if not self.f0 > 0:
            raise DomainError("filter corner f0 must be positive")


@dataclass(frozen=True)
class ElectricNoiseParams:
    b1: float = 1.7e-14  # V^2
    b2: float = 1.1e-17
    b3: float = 2.6e-19  # V^2 m^2

    def __post_init__(self):
        if min(self.b1, self.b2, self.b3) < 0:
            raise DomainError("electric noise coefficients must be >= 0")


@dataclass(frozen=True)
class MagneticNoiseParams:
    S_B: float = 1e-19  # T^2/Hz

    def __post_init__(self):
        if self.S_B < 0:
            raise DomainError("S_B must be >= 0")


@dataclass(frozen=True)
class NoiseParams:
    mechanical: MechanicalNoiseParams = MechanicalNoiseParams()
    electric: ElectricNoiseParams = ElectricNoiseParams()
    magnetic: MagneticNoiseParams = MagneticNoiseParams()


@dataclass(frozen=True)
class GasEnvironment:
    pressure: float = 1e-13  # Pa
    temperature: float = 300.0  # K
    gas_mass: float = HELIUM_MASS  # kg

    def __post_init__(self):
        if not self.pressure >= 0:
            raise DomainError(f"pressure must be >= 0, got {self.pressure}")
        if not self.temperature > 0:
            raise DomainError("gas temperature must be positive")
        if not self.gas_mass > 0:
            raise DomainError("gas particle mass must be positive")

    def with_pressure(self, p: float) -> GasEnvironment:
        return GasEnvironment(p, self.temperature, self.gas_mass)


def _positive(name: str, value: float):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive, got {value}")


def heating_rate_general(m: float, dF_dR: float, S_R: float) -> float:
    """Heating from a fluctuating variable R with one-sided PSD S_R at the trap frequency."""
    _positive("mass", m)
    if S_R < 0:
        raise DomainError("PSD must be >= 0")
    return dF_dR * dF_dR * S_R / (4.0 * m)


def mechanical_psd(f, params: MechanicalNoiseParams = MechanicalNoiseParams()):
    """Electrode displacement PSD in m^2/Hz, with f in Hz."""
    f_arr = np.asarray(f, dtype=float)
    if np.any(~(f_arr > 0)):
        raise DomainError("frequency must be positive")
    log_f = np.log(f_arr)
    # f^20 reaches 1e60 at 1 kHz; form a2^2/(f0^20 + f^20) from logs
    log_f0_20 = 20.0 * math.log(params.f0)
    log_f_20 = 20.0 * log_f
    log_den = np.logaddexp(log_f0_20, log_f_20)
    seismic = params.a2**2 * np.exp(-log_den)
    out = params.a1**2 * np.exp(-5.0 * log_f) + seismic + params.a3**2 / f_arr
    return out if out.ndim else float(out)


def mechanical_heating(m: float, omega0: float, S_x: float) -> float:
    """Gamma_x = m omega0^4 S_x / 4; electrode displacement couples through m omega0^2."""
    _positive("mass", m)
    _positive("omega0", omega0)
    return heating_rate_general(m, m * omega0 * omega0, S_x)


def electric_psd(omega, trap: TrapGeometry, params: ElectricNoiseParams = ElectricNoiseParams()):
    """Electric field PSD in (V/m)^2/Hz; 1/omega with omega in rad/s."""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise DomainError("omega must be positive")
    d = trap.d
    amplitude = (params.b1 + params.b2 * trap.V_Q**2) / d**2 + params.b3 / d**4
    out = amplitude / w
    return out if out.ndim else float(out)


def electric_heating(q: float, m: float, S_E: float) -> float:
    return heating_rate_general(m, q, S_E)


def trap_frequency(q: float, trap: TrapGeometry, m: float) -> float:
    """Secular angular frequency sqrt(kappa q V_Q / (m d^2)) from the static quadrupole."""
    if not q > 0:
        raise DomainError("an uncharged (or negatively signed) body has no static confinement; need q > 0")
    _positive("mass", m)
    return math.sqrt(trap.kappa * q * trap.V_Q / (m * trap.d**2))


def magnetic_heating(mu: float, trap: TrapGeometry, m: float, S_B: float) -> float:
    """Heating from field-gradient noise, taking dF/dB ~ mu/d."""
    if mu < 0:
        raise DomainError("magnetic moment must be >= 0")
    _positive("trap d", trap.d)
    return heating_rate_general(m, mu / trap.d, S_B)


def induced_dipole_heating(body: RigidBody, trap: TrapGeometry, S_B: float) -> float:
    """Upper-bound estimate for rf-induced currents in a conducting sphere coupling to B noise."""
    if body.shape is not Shape.SPHERE:
        raise UnsupportedShapeError("induced-dipole estimate is defined for spheres only")
    q_ac = trap.V_AC / trap.d**2
    field = q_ac * body.L
    dipole = EPS0 * body.L**3 * field
    return heating_rate_general(body.mass, trap.Omega_AC * dipole, S_B)


def mathieu_q(q: float, trap: TrapGeometry, m: float) -> float:
    """Mathieu parameter 2 q V_AC / (m Omega_AC^2 d^2) of the rf drive."""
    _positive("mass", m)
    if not trap.Omega_AC > 0:
        raise DomainError("rf drive frequency must be positive")
    return 2.0 * q * trap.V_AC / (m * trap.Omega_AC**2 * trap.d**2)


def mean_speed(env: GasEnvironment) -> float:
    """Maxwell-Boltzmann mean speed sqrt(8 kT / (pi m_g))."""
    return math.sqrt(8.0 * K_B * env.temperature / (math.pi * env.gas_mass))


def _sphere_only(body: RigidBody):
    if body.shape is not Shape.SPHERE:
        raise UnsupportedShapeError("collision cross-section 2 pi L^2 is only defined for a sphere")


def collision_cross_section(body: RigidBody) -> float:
    _sphere_only(body)
    return 2.0 * math.pi * body.L**2


def collision_heating(body: RigidBody, env: GasEnvironment) -> float:
    """Diffusive heating (m_g/m) p sigma v_bar from unresolved gas collisions."""
    sigma = collision_cross_section(body)
    return env.gas_mass / body.mass * env.pressure * sigma * mean_speed(env)


def max_pressure(upsilon: float, body: RigidBody, env: GasEnvironment) -> float:
    """Largest pressure for which collisional heating stays below ``upsilon``."""
    if not upsilon > 0:
        raise DomainError("upsilon must be positive")
    sigma = collision_cross_section(body)
    return upsilon * body.mass / (sigma * mean_speed(env) * env.gas_mass)


def collision_rate(body: RigidBody, env: GasEnvironment) -> float:
    """Collisions per second, n sigma v_bar with n = p/(k T)."""
    sigma = collision_cross_section(body)
    n = env.pressure / (K_B * env.temperature)
    return n * sigma * mean_speed(env)
