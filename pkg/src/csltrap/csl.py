"""CSL parameters, rigid bodies, geometric shape factors and the energy raising rate."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import E_CHARGE, HBAR, NUCLEON_MASS, OSMIUM_DENSITY, REFERENCE_RADIUS
from .errors import DomainError
from .optimize import golden_section_max
from .specfun import erf

SQRT_PI = math.sqrt(math.pi)

# Below these x the closed forms are replaced by their Maclaurin series in y = x^2.
# The sphere expression cancels terms of size 2/x^2 down to x^4/6, losing
# ~log10(12/x^6) digits, so its series must run up to x = 1.
SPHERE_SERIES_CUTOFF = 1.0
CUBE_SERIES_CUTOFF = 1e-3
_SPHERE_SERIES_TERMS = 24


class Shape(str, enum.Enum):
    SPHERE = "sphere"
    CUBE = "cube"


@dataclass(frozen=True)
class CslParameters:
    """Nucleon collapse rate ``lam`` (1/s) and critical length ``r_c`` (m)."""

    lam: float
    r_c: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"CSL lambda must be positive and finite, got {self.lam}")
        if not (math.isfinite(self.r_c) and self.r_c > 0):
            raise DomainError(f"CSL r_c must be positive and finite, got {self.r_c}")

    @property
    def gamma(self) -> float:
        """(4 pi r_c^2)^(3/2) * lambda, in m^3/s."""
        return (4.0 * math.pi * self.r_c**2) ** 1.5 * self.lam

    @property
    def alpha(self) -> float:
        """r_c^-2, in 1/m^2."""
        return 1.0 / self.r_c**2

    @classmethod
    def from_gamma_alpha(cls, gamma: float, alpha: float) -> CslParameters:
        if not (gamma > 0 and alpha > 0):
            raise DomainError("gamma and alpha must be positive")
        r_c = 1.0 / math.sqrt(alpha)
        return cls(lam=gamma / (4.0 * math.pi / alpha) ** 1.5, r_c=r_c)

    @classmethod
    def grw(cls) -> CslParameters:
        return cls(lam=1e-16, r_c=1e-7)


def csl_param_convert(csl: CslParameters) -> tuple[float, float]:
    """Return ``(gamma, alpha)`` for the given (lambda, r_c)."""
    return csl.gamma, csl.alpha


@dataclass(frozen=True)
class RigidBody:
    """A homogeneous sphere (radius ``L``) or cube (side ``2L``)."""

    shape: Shape
    L: float
    density: float = OSMIUM_DENSITY
    charge: float = E_CHARGE
    magnetic_moment: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError(f"body size L must be positive, got {self.L}")
        if not (math.isfinite(self.density) and self.density > 0):
            raise DomainError(f"density must be positive, got {self.density}")
        if not (math.isfinite(self.magnetic_moment) and self.magnetic_moment >= 0):
            raise DomainError(f"magnetic moment must be >= 0, got {self.magnetic_moment}")
        if not math.isfinite(self.charge):
            raise DomainError("charge must be finite")

    @property
    def mass(self) -> float:
        return body_mass(self)

    def with_size(self, L: float) -> RigidBody:
        return RigidBody(self.shape, L, self.density, self.charge, self.magnetic_moment)

    @classmethod
    def reference_sphere(cls) -> RigidBody:
        """Singly charged osmium sphere of radius 0.238 um."""
        return cls(Shape.SPHERE, REFERENCE_RADIUS)


def body_mass(body: RigidBody) -> float:
    if body.shape is Shape.SPHERE:
        return 4.0 / 3.0 * math.pi * body.L**3 * body.density
    return 8.0 * body.L**3 * body.density


def _check_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("shape factor argument x = L/r_c must be positive and finite")
    return arr


def _sphere_I_series(y: np.ndarray) -> np.ndarray:
    # I = sum_{n>=2} (-1)^n (n-1)/(n+1)! y^n
    total = np.zeros_like(y)
    power = y * y
    fact = 6.0  # (n+1)! at n = 2
    for n in range(2, 2 + _SPHERE_SERIES_TERMS):
        total = total + (-1) ** n * (n - 1) / fact * power
        power = power * y
        fact *= n + 2
    return total


def sphere_integral(x):
    """I(x) = 1 - 2/x^2 + (1 + 2/x^2) exp(-x^2)."""
    x = _check_x(x)
    y = x * x
    out = np.empty_like(y)
    small = x < SPHERE_SERIES_CUTOFF
    out[small] = _sphere_I_series(y[small])
    yb = y[~small]
    out[~small] = 1.0 - 2.0 / yb + (1.0 + 2.0 / yb) * np.exp(-yb)
    return out if out.ndim else float(out)


def chi_sphere(x):
    """Shape factor of a sphere of radius L in free space, x = L/r_c (per axis)."""
    x = _check_x(x)
    out = 2.0 * math.pi * np.asarray(sphere_integral(x)) / x
    return out if out.ndim else float(out)


def cube_integrals(x):
    """Return ``(I12, I3)`` for a cube of side 2L."""
    x = _check_x(x)
    y = x * x
    i3 = -2.0 * np.expm1(-y)
    g = np.empty_like(y)
    small = x < CUBE_SERIES_CUTOFF
    ys = y[small]
    # g = sum_{m>=1} (-1)^(m-1) y^m / (m! (2m-1))
    g[small] = ys * (1.0 - ys / 6.0 + ys * ys / 30.0 - ys**3 / 168.0)
    xb = x[~small]
    g[~small] = np.expm1(-y[~small]) + SQRT_PI * xb * np.asarray(erf(xb))
    i12 = g * g
    if i12.ndim == 0:
        return float(i12), float(i3)
    return i12, i3


def chi_cube(x):
    """Shape factor of a cube of side 2L in a 1D harmonic trap, x = L/r_c."""
    x = _check_x(x)
    i12, i3 = cube_integrals(x)
    out = np.asarray(i12) * np.asarray(i3) / x**3
    return out if out.ndim else float(out)


def chi(shape: Shape, x):
    return chi_sphere(x) if Shape(shape) is Shape.SPHERE else chi_cube(x)


def chi_argmax(shape: Shape, lo: float = 1e-2, hi: float = 1e2, xtol: float = 1e-4):
    """Locate the maximum of chi on ``[lo, hi]`` by golden-section search."""
    shape = Shape(shape)
    return golden_section_max(lambda v: chi(shape, v), lo, hi, xtol=xtol)


def energy_raising_rate(body: RigidBody, csl: CslParameters) -> float:
    """CSL energy raising rate (W) along one motional axis."""
    factor = chi(body.shape, body.L / csl.r_c)
    return factor * HBAR**2 * csl.lam * csl.r_c * body.density / NUCLEON_MASS**2
