"""Heating budgets, the smallest detectable collapse rate, and detection timing."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import HBAR, NUCLEON_MASS
from .csl import CslParameters, RigidBody, chi, energy_raising_rate
from .errors import DegenerateInputError, DomainError
from .noise import (
    GasEnvironment,
    NoiseParams,
    TrapGeometry,
    collision_heating,
    electric_heating,
    electric_psd,
    induced_dipole_heating,
    magnetic_heating,
    mechanical_heating,
    mechanical_psd,
    trap_frequency,
)

# Order also breaks ties when picking the dominant source.
NOISE_SOURCES = ("mechanical", "electric", "magnetic", "induced", "collision")


@dataclass(frozen=True)
class HeatingBudget:
    upsilon_csl: float
    gamma_mechanical: float
    gamma_electric: float
    gamma_magnetic: float
    gamma_induced: float
    gamma_collision: float
    omega0: float

    @property
    def components(self) -> dict[str, float]:
        return {
            "mechanical": self.gamma_mechanical,
            "electric": self.gamma_electric,
            "magnetic": self.gamma_magnetic,
            "induced": self.gamma_induced,
            "collision": self.gamma_collision,
        }

    @property
    def total_noise(self) -> float:
        return math.fsum(self.components.values())

    @property
    def dominant_source(self) -> str:
        comps = self.components
        return max(NOISE_SOURCES, key=lambda k: (comps[k], -NOISE_SOURCES.index(k)))

    @property
    def detectable(self) -> bool:
        return self.upsilon_csl > self.total_noise


def noise_budget(
    body: RigidBody, trap: TrapGeometry, env: GasEnvironment, noise: NoiseParams
) -> tuple[float, dict[str, float]]:
    """Return ``(omega0, components)`` for all non-CSL heating sources."""
    m = body.mass
    omega0 = trap_frequency(body.charge, trap, m)
    s_x = mechanical_psd(omega0 / (2 * math.pi), noise.mechanical)
    s_e = electric_psd(omega0, trap, noise.electric)
    comps = {
        "mechanical": mechanical_heating(m, omega0, s_x),
        "electric": electric_heating(body.charge, m, s_e),
        "magnetic": magnetic_heating(body.magnetic_moment, trap, m, noise.magnetic.S_B),
        "induced": induced_dipole_heating(body, trap, noise.magnetic.S_B),
        "collision": collision_heating(body, env),
    }
    return omega0, comps


def heating_budget(
    body: RigidBody,
    trap: TrapGeometry,
    env: GasEnvironment,
    noise: NoiseParams,
    csl: CslParameters,
) -> HeatingBudget:
    omega0, c = noise_budget(body, trap, env, noise)
    return HeatingBudget(
        upsilon_csl=energy_raising_rate(body, csl),
        gamma_mechanical=c["mechanical"],
        gamma_electric=c["electric"],
        gamma_magnetic=c["magnetic"],
        gamma_induced=c["induced"],
        gamma_collision=c["collision"],
        omega0=omega0,
    )


def lambda_for_rate(rate: float, r_c: float, body: RigidBody) -> float:
    """Collapse rate at which the CSL heating equals ``rate`` (linear inversion)."""
    if not rate > 0:
        raise DegenerateInputError("noise floor is zero: no finite detection threshold")
    factor = chi(body.shape, body.L / r_c)
    if not factor > 0:
        raise DomainError(f"shape factor vanishes at r_c = {r_c}")
    return rate * NUCLEON_MASS**2 / (factor * HBAR**2 * r_c * body.density)


def lambda_min(
    r_c: float, body: RigidBody, trap: TrapGeometry, env: GasEnvironment, noise: NoiseParams
) -> float:
    """Smallest collapse rate whose heating exceeds the total noise floor."""
    _, comps = noise_budget(body, trap, env, noise)
    return lambda_for_rate(math.fsum(comps.values()), r_c, body)


class TrapSizeRule(str, enum.Enum):
    FIXED = "fixed"
    MIN_FREQUENCY = "min_frequency"


def log_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    return tuple(float(v) for v in np.logspace(math.log10(lo), math.log10(hi), n))


@dataclass(frozen=True)
class MapSpec:
    r_c_grid: tuple[float, ...] = field(default_factory=lambda: log_grid(1e-9, 1e-4, 121))
    L_values: tuple[float, ...] = (1e-7, 1e-6, 1e-5, 1e-4)
    pressures: tuple[float, ...] = (1e-14, 1e-12)
    body_template: RigidBody = field(default_factory=RigidBody.reference_sphere)
    trap_template: TrapGeometry = field(default_factory=TrapGeometry)
    noise: NoiseParams = field(default_factory=NoiseParams)
    env_template: GasEnvironment = field(default_factory=GasEnvironment)
    trap_size_rule: TrapSizeRule = TrapSizeRule.MIN_FREQUENCY
    min_frequency: float = 0.01  # Hz

    def __post_init__(self):
        for name in ("r_c_grid", "L_values", "pressures"):
            values = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, values)
            if not values:
                raise DomainError(f"{name} must not be empty")
            if any(not v > 0 for v in values):
                raise DomainError(f"{name} must be positive")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise DomainError(f"{name} must be strictly increasing")
        object.__setattr__(self, "trap_size_rule", TrapSizeRule(self.trap_size_rule))
        if not self.min_frequency > 0:
            raise DomainError("min_frequency must be positive")


@dataclass(frozen=True)
class MapRow:
    r_c: float
    L: float
    pressure: float
    lambda_min: float
    dominant_noise_source: str
    omega0: float
    d_used: float


def trap_for_body(spec: MapSpec, body: RigidBody) -> TrapGeometry:
    """Apply the trap-size rule: shrink d until the secular frequency reaches the floor."""
    trap = spec.trap_template
    if spec.trap_size_rule is TrapSizeRule.FIXED:
        return trap
    f = trap_frequency(body.charge, trap, body.mass) / (2 * math.pi)
    if f >= spec.min_frequency:
        return trap
    # omega0 scales as 1/d
    return trap.with_d(trap.d * f / spec.min_frequency)


def _map_curve(spec: MapSpec, L: float, p: float) -> list[MapRow]:
    body = spec.body_template.with_size(L)
    trap = trap_for_body(spec, body)
    env = spec.env_template.with_pressure(p)
    omega0, comps = noise_budget(body, trap, env, spec.noise)
    total = math.fsum(comps.values())
    dominant = max(NOISE_SOURCES, key=lambda k: (comps[k], -NOISE_SOURCES.index(k)))
    return [
        MapRow(r_c, L, p, lambda_for_rate(total, r_c, body), dominant, omega0, trap.d)
        for r_c in spec.r_c_grid
    ]


def detectability_map(spec: MapSpec = MapSpec(), threads: int = 1) -> list[MapRow]:
    """Smallest detectable lambda over the (r_c, L, p) grid.

    Rows are ordered r_c (outer), L, p (inner), all ascending; the ordering
    does not depend on ``threads``.
    """
    jobs = [(L, p) for L in spec.L_values for p in spec.pressures]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            curves = list(pool.map(lambda job: _map_curve(spec, *job), jobs))
    else:
        curves = [_map_curve(spec, *job) for job in jobs]
    rows = []
    for i in range(len(spec.r_c_grid)):
        rows.extend(curve[i] for curve in curves)
    return rows


@dataclass(frozen=True)
class SweepPoint:
    d: float
    f: float
    gamma_mechanical: float
    gamma_electric: float
    upsilon: float


def heating_vs_size_sweep(
    body: RigidBody,
    d_range: tuple[float, float] = (1e-4, 1.0),
    n_points: int = 200,
    trap: TrapGeometry = TrapGeometry(),
    noise: NoiseParams = NoiseParams(),
    csl: CslParameters = CslParameters.grw(),
) -> list[SweepPoint]:
    """Mechanical, electric and CSL heating against trap size (log-spaced d)."""
    d_lo, d_hi = d_range
    if not (0 < d_lo < d_hi) or n_points < 2:
        raise DomainError("need 0 < d_min < d_max and at least two points")
    m = body.mass
    ups = energy_raising_rate(body, csl)
    out = []
    for d in log_grid(d_lo, d_hi, n_points):
        t = trap.with_d(d)
        w = trap_frequency(body.charge, t, m)
        f = w / (2 * math.pi)
        out.append(
            SweepPoint(
                d=d,
                f=f,
                gamma_mechanical=mechanical_heating(m, w, mechanical_psd(f, noise.mechanical)),
                gamma_electric=electric_heating(body.charge, m, electric_psd(w, t, noise.electric)),
                upsilon=ups,
            )
        )
    return out


@dataclass(frozen=True)
class DetectionModel:
    """Phase-space resolution: each run resolves position and momentum to dx dp = 2 nbar hbar."""

    nbar: float = 500.0

    def __post_init__(self):
        if not self.nbar >= 1:
            raise DomainError("nbar must be >= 1")

    @property
    def phase_space_area(self) -> float:
        return 2.0 * self.nbar * HBAR


def detection_energy(model: DetectionModel, omega0: float) -> float:
    """Resolvable energy nbar hbar omega0 (J)."""
    if not omega0 > 0:
        raise DomainError("omega0 must be positive")
    return model.nbar * HBAR * omega0


def detection_time(E0: float, upsilon: float) -> float:
    if not upsilon > 0:
        raise DomainError("heating rate must be positive")
    return E0 / upsilon


def with_noise_scaled(noise: NoiseParams, **factors: float) -> NoiseParams:
    """Copy of ``noise`` with named coefficients (a1, b2, S_B, ...) multiplied."""
    mech, elec, mag = noise.mechanical, noise.electric, noise.magnetic
    for key, factor in factors.items():
        if hasattr(mech, key):
            mech = replace(mech, **{key: getattr(mech, key) * factor})
        elif hasattr(elec, key):
            elec = replace(elec, **{key: getattr(elec, key) * factor})
        elif hasattr(mag, key):
            mag = replace(mag, **{key: getattr(mag, key) * factor})
        else:
            raise KeyError(key)
    return NoiseParams(mech, elec, mag)
