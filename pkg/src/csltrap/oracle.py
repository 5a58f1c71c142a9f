"""Monte-Carlo cross-check of the analytic heating rates.

A 1D harmonic oscillator is driven by synthesised force noise (or by gas
collision kicks) and the heating rate is read off as the least-squares slope
of the ensemble-mean energy.

Seeding: trajectory ``i`` of an ensemble draws from
``numpy.random.default_rng(SeedSequence(master_seed, spawn_key=(i,)))``, the
same stream ``SeedSequence(master_seed).spawn(n)[i]`` would give. Results are
therefore independent of how trajectories are scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import kernels
from .constants import K_B
from .csl import RigidBody
from .errors import DomainError, SimulationConfigError
from .noise import GasEnvironment, collision_heating, collision_rate


@dataclass(frozen=True)
class WhiteForce:
    S_F: float  # N^2/Hz, one-sided

    def __post_init__(self):
        if self.S_F < 0:
            raise DomainError("PSD must be >= 0")

    def psd(self, f):
        return self.S_F + 0.0 * np.asarray(f, dtype=float)


@dataclass(frozen=True)
class OneOverF:
    """S(omega) = c / omega, omega in rad/s."""

    c: float

    def __post_init__(self):
        if self.c < 0:
            raise DomainError("PSD coefficient must be >= 0")

    def psd(self, f):
        return self.c / (2 * math.pi * np.asarray(f, dtype=float))


@dataclass(frozen=True)
class TabulatedPSD:
    """PSD given at increasing frequencies, interpolated linearly in log-log space."""

    freqs: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if f.ndim != 1 or f.shape != v.shape or f.size < 2:
            raise DomainError("tabulated PSD needs matching 1D grids of at least two points")
        if np.any(np.diff(f) <= 0) or f[0] <= 0:
            raise DomainError("tabulated frequencies must be positive and strictly increasing")
        if np.any(v < 0):
            raise DomainError("PSD values must be >= 0")
        object.__setattr__(self, "freqs", tuple(f.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    @classmethod
    def from_function(cls, fn, f_lo: float, f_hi: float, n: int = 400) -> TabulatedPSD:
        grid = np.logspace(math.log10(f_lo), math.log10(f_hi), n)
        return cls(tuple(grid), tuple(np.asarray(fn(grid), dtype=float)))

    def psd(self, f):
        f = np.asarray(f, dtype=float)
        fs = np.asarray(self.freqs)
        if np.any(f < fs[0] * (1 - 1e-12)) or np.any(f > fs[-1] * (1 + 1e-12)):
            raise DomainError("frequency outside the tabulated range")
        vs = np.asarray(self.values)
        # zeros would break log interpolation; keep them as exact zeros
        tiny = np.finfo(float).tiny
        out = np.exp(np.interp(np.log(f), np.log(fs), np.log(np.maximum(vs, tiny))))
        return np.where(out <= tiny, 0.0, out)


NoiseSpec = Union[WhiteForce, OneOverF, TabulatedPSD]


@dataclass(frozen=True)
class SimulationConfig:
    dt: float
    duration: float
    ensemble_size: int = 200
    master_seed: int = 0
    initial_energy: float = 0.0
    sample_every: int | None = None  # steps between energy samples; None picks ~1000 samples

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise SimulationConfigError("dt must be positive")
        if not self.duration > 0:
            raise SimulationConfigError("duration must be positive")
        if self.ensemble_size < 1:
            raise SimulationConfigError("ensemble_size must be >= 1")
        if self.initial_energy < 0:
            raise SimulationConfigError("initial_energy must be >= 0")
        if not 0 <= self.master_seed < 2**64:
            raise SimulationConfigError("master_seed must be a 64-bit unsigned integer")

    @classmethod
    def for_frequency(cls, omega0: float, periods: float = 100, steps_per_period: int = 100, **kw):
        period = 2 * math.pi / omega0
        return cls(dt=period / steps_per_period, duration=periods * period, **kw)

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def stride(self) -> int:
        if self.sample_every is not None:
            return max(1, int(self.sample_every))
        return max(1, self.n_steps // 1000)

    def validate(self, omega0: float):
        period = 2 * math.pi / omega0
        if self.duration < 100 * period * (1 - 1e-9):
            raise SimulationConfigError(
                f"duration {self.duration:g} s is shorter than 100 trap periods ({100 * period:g} s)"
            )
        if self.dt > period / 100 * (1 + 1e-9):
            raise SimulationConfigError(f"dt {self.dt:g} s exceeds 1/100 of the trap period")


@dataclass
class TrajectoryResult:
    sample_times: np.ndarray
    ensemble_mean_energy: np.ndarray
    final_energies: np.ndarray


@dataclass(frozen=True)
class HeatingFit:
    slope: float
    slope_stderr: float
    intercept: float


@dataclass(frozen=True)
class HeatingCheck:
    analytic: float
    simulated: float
    stderr: float

    @property
    def ratio(self) -> float:
        if self.analytic == 0:
            return math.nan
        return self.simulated / self.analytic

    @property
    def relative_error(self) -> float:
        return abs(self.ratio - 1.0)


@dataclass(frozen=True)
class CollisionCheck(HeatingCheck):
    kicks: int = 0
    expected_kicks: float = 0.0

    @property
    def kick_sigma(self) -> float:
        """Deviation of the kick count from its Poisson mean, in standard deviations."""
        if self.expected_kicks == 0:
            return 0.0 if self.kicks == 0 else math.inf
        return (self.kicks - self.expected_kicks) / math.sqrt(self.expected_kicks)


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def synthesis_band(f_center: float, dt: float) -> tuple[float, float]:
    return f_center / 10.0, min(10.0 * f_center, 1.0 / (2.0 * dt))


def synthesize_noise(
    spec: NoiseSpec,
    duration: float,
    dt: float,
    seed=None,
    f_center: float | None = None,
) -> np.ndarray:
    """Stationary noise series with one-sided PSD ``spec``.

    White noise is i.i.d. Gaussian with variance S/(2 dt). Coloured spectra
    are a sum of cosines on the grid f_k = k/duration with amplitudes
    sqrt(2 S(f_k) df) and uniform random phases, restricted to one decade
    either side of ``f_center`` (and below Nyquist).
    """
    if not (dt > 0 and duration > 0):
        raise DomainError("dt and duration must be positive")
    n = int(round(duration / dt))
    if n < 2:
        raise DomainError("duration must span at least two steps")
    rng = _as_rng(seed)
    if isinstance(spec, WhiteForce):
        if spec.S_F == 0:
            return np.zeros(n)
        return rng.standard_normal(n) * math.sqrt(spec.S_F / (2.0 * dt))
    if f_center is None or not f_center > 0:
        raise DomainError("coloured noise synthesis needs a positive f_center")
    span = n * dt
    lo, hi = synthesis_band(f_center, dt)
    k_lo = max(1, math.ceil(lo * span - 1e-9))
    k_hi = min(math.floor(hi * span + 1e-9), (n - 1) // 2)
    spectrum = np.zeros(n // 2 + 1, dtype=complex)
    if k_hi >= k_lo:
        k = np.arange(k_lo, k_hi + 1)
        amp = np.sqrt(2.0 * spec.psd(k / span) / span)
        phase = rng.uniform(0.0, 2.0 * math.pi, size=k.size)
        spectrum[k] = 0.5 * n * amp * np.exp(1j * phase)
    return np.fft.irfft(spectrum, n=n)


def integrate_oscillator(
    m: float,
    omega0: float,
    force,
    dt: float,
    x0: float = 0.0,
    p0: float = 0.0,
    stride: int = 1,
    backend: str | None = None,
) -> TrajectoryResult:
    """Integrate x'' = -omega0^2 x + F(t)/m for one force series (or rows of a 2D array).

    The update is a symplectic splitting: exact harmonic rotation over dt,
    then the momentum kick F_i dt.
    """
    if not (m > 0 and omega0 > 0 and dt > 0):
        raise DomainError("m, omega0 and dt must be positive")
    if omega0 * dt >= 0.1:
        raise SimulationConfigError(f"unstable step: omega0*dt = {omega0 * dt:.3g} >= 0.1")
    forces = np.atleast_2d(np.asarray(force, dtype=float))
    runs = [
        kernels.propagate(x0, p0, m, omega0, dt, row * dt, stride, backend)[0] for row in forces
    ]
    energies = np.vstack(runs)
    times = np.arange(energies.shape[1]) * (stride * dt)
    return TrajectoryResult(times, energies.mean(axis=0), energies[:, -1].copy())


ImpulseFactory = Callable[[np.random.Generator, int], np.ndarray]


def run_ensemble(
    m: float,
    omega0: float,
    impulses: ImpulseFactory,
    config: SimulationConfig,
    threads: int = 1,
    backend: str | None = None,
) -> TrajectoryResult:
    """Run ``config.ensemble_size`` trajectories; ``impulses(rng, n_steps)`` gives each kick train."""
    n = config.n_steps
    stride = config.stride
    x0 = math.sqrt(2.0 * config.initial_energy / (m * omega0**2))

    def one(i: int) -> np.ndarray:
        kicks = impulses(trajectory_rng(config.master_seed, i), n)
        return kernels.propagate(x0, 0.0, m, omega0, config.dt, kicks, stride, backend)[0]

    idx = range(config.ensemble_size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(one, idx))
    else:
        runs = [one(i) for i in idx]
    energies = np.vstack(runs)
    times = np.arange(energies.shape[1]) * (stride * config.dt)
    return TrajectoryResult(times, energies.mean(axis=0), energies[:, -1].copy())


def estimate_heating_slope(result: TrajectoryResult) -> HeatingFit:
    """Ordinary least squares of ensemble-mean energy against time."""
    t = np.asarray(result.sample_times, dtype=float)
    e = np.asarray(result.ensemble_mean_energy, dtype=float)
    if t.size < 10 or t.size != e.size:
        raise DomainError("need at least 10 matching time/energy samples")
    tc = t - t.mean()
    sxx = float(np.dot(tc, tc))
    if not sxx > 0:
        raise DomainError("degenerate time grid")
    slope = float(np.dot(tc, e - e.mean())) / sxx
    intercept = float(e.mean() - slope * t.mean())
    resid = e - (intercept + slope * t)
    ssr = float(np.dot(resid, resid))
    stderr = math.sqrt(ssr / (t.size - 2) / sxx)
    return HeatingFit(slope, stderr, intercept)


def verify_heating_formula(
    m: float,
    omega0: float,
    spec: NoiseSpec,
    config: SimulationConfig,
    coupling: float = 1.0,
    threads: int = 1,
    backend: str | None = None,
) -> HeatingCheck:
    """Compare coupling^2 S(omega0)/(4m) with the simulated heating slope.

    The oscillator is driven by the force ``coupling * R(t)`` where R has PSD
    ``spec``; ``coupling = m omega0^2`` turns a position noise into the
    electrode-displacement force.
    """
    config.validate(omega0)
    f0 = omega0 / (2 * math.pi)
    analytic = coupling**2 * float(spec.psd(f0)) / (4.0 * m)
    scale = coupling * config.dt

    def impulses(rng, n):
        return scale * synthesize_noise(spec, n * config.dt, config.dt, rng, f_center=f0)

    result = run_ensemble(m, omega0, impulses, config, threads, backend)
    fit = estimate_heating_slope(result)
    return HeatingCheck(analytic, fit.slope, fit.slope_stderr)


def collision_impulses(
    rng: np.random.Generator, n: int, dt: float, rate: float, env: GasEnvironment
) -> np.ndarray:
    """Momentum kicks along the trap axis from gas molecules reflecting off a sphere.

    Arrivals per step are Poisson(rate dt). Each molecule reflects
    specularly, transferring 2 m_g v_n along the surface normal; v_n follows
    the flux-weighted (Rayleigh) distribution and the axial projection of the
    normal is uniform on [-1, 1] for isotropic impingement.
    """
    counts = rng.poisson(rate * dt, size=n)
    total = int(counts.sum())
    if total == 0:
        return np.zeros(n)
    v_n = rng.rayleigh(math.sqrt(K_B * env.temperature / env.gas_mass), size=total)
    cos_axis = rng.uniform(-1.0, 1.0, size=total)
    dp = 2.0 * env.gas_mass * v_n * cos_axis
    step = np.repeat(np.arange(n), counts)
    return np.bincount(step, weights=dp, minlength=n)


def simulate_collision_kicks(
    body: RigidBody,
    env: GasEnvironment,
    omega0: float,
    config: SimulationConfig,
    threads: int = 1,
    backend: str | None = None,
) -> CollisionCheck:
    """Kinetic Monte Carlo of background-gas kicks against (m_g/m) p sigma v_bar."""
    config.validate(omega0)
    rate = collision_rate(body, env)
    analytic = collision_heating(body, env)
    kick_counts = np.zeros(config.ensemble_size, dtype=np.int64)
    dt = config.dt

    def impulses(rng, n):
        return collision_impulses(rng, n, dt, rate, env)

    # count kicks with a replay of the same streams so the kernel path stays untouched
    for i in range(config.ensemble_size):
        kick_counts[i] = trajectory_rng(config.master_seed, i).poisson(rate * dt, size=config.n_steps).sum()

    result = run_ensemble(body.mass, omega0, impulses, config, threads, backend)
    fit = estimate_heating_slope(result)
    expected = rate * config.n_steps * dt * config.ensemble_size
    return CollisionCheck(
        analytic=analytic,
        simulated=fit.slope,
        stderr=fit.slope_stderr,
        kicks=int(kick_counts.sum()),
        expected_kicks=expected,
    )
