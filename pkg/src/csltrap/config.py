"""Run configuration: a flat ``key = value`` file with dotted keys.

Example::

    # trap of 2 cm at 40 V
    trap.d = 0.02
    trap.V_Q = 40
    map.L_values = 1e-7, 1e-6

Everything is SI. Lines starting with ``#`` and blank lines are ignored,
as is anything after a ``#`` on a value line. Every key has a default (the
reference scenario: singly charged osmium sphere, L = 0.238 um, in a 1 cm
trap at 20 V, helium at 300 K and 1e-13 Pa, GRW collapse parameters).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Callable

from .constants import E_CHARGE, HELIUM_MASS, OSMIUM_DENSITY, REFERENCE_RADIUS
from .csl import CslParameters, RigidBody, Shape
from .errors import ConfigError, CslTrapError
from .feasibility import DetectionModel, MapSpec, TrapSizeRule, log_grid
from .noise import (
    ElectricNoiseParams,
    GasEnvironment,
    MagneticNoiseParams,
    MechanicalNoiseParams,
    NoiseParams,
    TrapGeometry,
)


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not a finite number")
    return value


def _int(text: str) -> int:
    return int(text)


def _floats(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(_float(p) for p in parts)


def _auto_float(text: str):
    return None if text.strip().lower() == "auto" else _float(text)


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text

    return parse


def _pos(v) -> bool:
    return v is None or (v > 0 if not isinstance(v, tuple) else all(x > 0 for x in v))


def _nonneg(v) -> bool:
    return v >= 0


def _any(v) -> bool:
    return True


@dataclass(frozen=True)
class _Key:
    default: Any
    parse: Callable[[str], Any]
    check: Callable[[Any], bool] = _any
    requirement: str = ""


_POSITIVE = (_pos, "must be positive")
_NONNEG = (_nonneg, "must be >= 0")

KEYS: dict[str, _Key] = {
    "body.shape": _Key("sphere", _choice("sphere", "cube")),
    "body.L": _Key(REFERENCE_RADIUS, _float, *_POSITIVE),
    "body.density": _Key(OSMIUM_DENSITY, _float, *_POSITIVE),
    "body.charge": _Key(E_CHARGE, _float),
    "body.mu": _Key(0.0, _float, *_NONNEG),
    "trap.d": _Key(0.01, _float, *_POSITIVE),
    "trap.V_Q": _Key(20.0, _float, *_POSITIVE),
    "trap.V_AC": _Key(300.0, _float, *_NONNEG),
    "trap.Omega_AC": _Key(2 * math.pi * 10.0, _float, *_NONNEG),
    "trap.kappa": _Key(2.0, _float, *_POSITIVE),
    "csl.lambda": _Key(1e-16, _float, *_POSITIVE),
    "csl.r_c": _Key(1e-7, _float, *_POSITIVE),
    "gas.pressure": _Key(1e-13, _float, *_NONNEG),
    "gas.temperature": _Key(300.0, _float, *_POSITIVE),
    "gas.mass": _Key(HELIUM_MASS, _float, *_POSITIVE),
    "noise.a1": _Key(1.5e-15, _float, *_NONNEG),
    "noise.a2": _Key(1500e-15, _float, *_NONNEG),
    "noise.a3": _Key(0.0006e-15, _float, *_NONNEG),
    "noise.f0": _Key(0.65, _float, *_POSITIVE),
    "noise.b1": _Key(1.7e-14, _float, *_NONNEG),
    "noise.b2": _Key(1.1e-17, _float, *_NONNEG),
    "noise.b3": _Key(2.6e-19, _float, *_NONNEG),
    "noise.S_B": _Key(1e-19, _float, *_NONNEG),
    "detection.nbar": _Key(500.0, _float, lambda v: v >= 1, "must be >= 1"),
    "detection.f": _Key(0.1, _float, *_POSITIVE),
    "chi.x_min": _Key(1e-2, _float, *_POSITIVE),
    "chi.x_max": _Key(1e2, _float, *_POSITIVE),
    "chi.points": _Key(200, _int, lambda v: v >= 2, "must be >= 2"),
    "sweep.d_min": _Key(1e-4, _float, *_POSITIVE),
    "sweep.d_max": _Key(1.0, _float, *_POSITIVE),
    "sweep.points": _Key(200, _int, lambda v: v >= 2, "must be >= 2"),
    "map.r_c_min": _Key(1e-9, _float, *_POSITIVE),
    "map.r_c_max": _Key(1e-4, _float, *_POSITIVE),
    "map.r_c_points": _Key(121, _int, lambda v: v >= 1, "must be >= 1"),
    "map.L_values": _Key((1e-7, 1e-6, 1e-5, 1e-4), _floats, *_POSITIVE),
    "map.pressures": _Key((1e-14, 1e-12), _floats, *_POSITIVE),
    "map.trap_size_rule": _Key("min_frequency", _choice("fixed", "min_frequency")),
    "map.f_min": _Key(0.01, _float, *_POSITIVE),
    "sim.dt": _Key(None, _auto_float, *_POSITIVE),
    "sim.duration": _Key(None, _auto_float, *_POSITIVE),
    "sim.ensemble_size": _Key(200, _int, lambda v: v >= 1, "must be >= 1"),
    "sim.seed": _Key(0, _int, lambda v: 0 <= v < 2**64, "must be a 64-bit unsigned integer"),
    "sim.initial_energy": _Key(0.0, _float, *_NONNEG),
    "sim.pressure": _Key(1e-10, _float, *_NONNEG),
}


@dataclass(frozen=True)
class SimSettings:
    dt: float | None  # None: 1/100 of the trap period
    duration: float | None  # None: 100 trap periods
    ensemble_size: int
    seed: int
    initial_energy: float
    collision_pressure: float


@dataclass(frozen=True)
class RunConfig:
    values: dict
    body: RigidBody
    trap: TrapGeometry
    csl: CslParameters
    gas: GasEnvironment
    noise: NoiseParams
    detection: DetectionModel
    map: MapSpec
    sim: SimSettings

    def get(self, key: str):
        return self.values[key]

    def canonical_text(self) -> str:
        """Sorted ``key = value`` listing of every setting; parses back to the same config."""
        lines = []
        for key in sorted(self.values):
            v = self.values[key]
            if isinstance(v, tuple):
                v = ", ".join(repr(x) for x in v)
            elif v is None:
                v = "auto"
            elif isinstance(v, str):
                pass
            else:
                v = repr(v)
            lines.append(f"{key} = {v}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def with_seed(self, seed: int) -> RunConfig:
        if not KEYS["sim.seed"].check(seed):
            raise ConfigError(KEYS["sim.seed"].requirement, key="--seed")
        return build_config({**self.values, "sim.seed": seed}, {})


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` text into a validated :class:`RunConfig`."""
    values = {k: spec.default for k, spec in KEYS.items()}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in lines:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", key=key, line=lineno)
        spec = KEYS[key]
        try:
            parsed = spec.parse(value)
        except ValueError as exc:
            raise ConfigError(f"malformed value {value!r}: {exc}", key=key, line=lineno) from None
        if not spec.check(parsed):
            raise ConfigError(f"{spec.requirement}, got {value}", key=key, line=lineno)
        values[key] = parsed
        lines[key] = lineno
    return build_config(values, lines)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return parse_config("")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return parse_config(text)


def _cross_check(values: dict, lines: dict):
    for lo, hi in (("chi.x_min", "chi.x_max"), ("sweep.d_min", "sweep.d_max"), ("map.r_c_min", "map.r_c_max")):
        if not values[lo] < values[hi]:
            raise ConfigError(f"must be below {hi}", key=lo, line=lines.get(lo) or lines.get(hi))
    for key in ("map.L_values", "map.pressures"):
        seq = values[key]
        if any(b <= a for a, b in zip(seq, seq[1:])):
            raise ConfigError("must be strictly increasing", key=key, line=lines.get(key))


def build_config(values: dict, lines: dict) -> RunConfig:
    _cross_check(values, lines)
    v = values
    try:
        body = RigidBody(Shape(v["body.shape"]), v["body.L"], v["body.density"], v["body.charge"], v["body.mu"])
        trap = TrapGeometry(v["trap.d"], v["trap.V_Q"], v["trap.V_AC"], v["trap.Omega_AC"], v["trap.kappa"])
        noise = NoiseParams(
            MechanicalNoiseParams(v["noise.a1"], v["noise.a2"], v["noise.a3"], v["noise.f0"]),
            ElectricNoiseParams(v["noise.b1"], v["noise.b2"], v["noise.b3"]),
            MagneticNoiseParams(v["noise.S_B"]),
        )
        gas = GasEnvironment(v["gas.pressure"], v["gas.temperature"], v["gas.mass"])
        grid = log_grid(v["map.r_c_min"], v["map.r_c_max"], v["map.r_c_points"]) if v["map.r_c_points"] > 1 else (v["map.r_c_min"],)
        mapspec = MapSpec(
            r_c_grid=grid,
            L_values=v["map.L_values"],
            pressures=v["map.pressures"],
            body_template=body,
            trap_template=trap,
            noise=noise,
            env_template=gas,
            trap_size_rule=TrapSizeRule(v["map.trap_size_rule"]),
            min_frequency=v["map.f_min"],
        )
        return RunConfig(
            values=dict(v),
            body=body,
            trap=trap,
            csl=CslParameters(v["csl.lambda"], v["csl.r_c"]),
            gas=gas,
            noise=noise,
            detection=DetectionModel(v["detection.nbar"]),
            map=mapspec,
            sim=SimSettings(
                v["sim.dt"], v["sim.duration"], v["sim.ensemble_size"], v["sim.seed"],
                v["sim.initial_energy"], v["sim.pressure"],
            ),
        )
    except CslTrapError as exc:
        raise ConfigError(str(exc)) from None
