"""Backend selection for the oscillator kernel.

The Cython extension is used when it was built; otherwise the pure-Python
implementation is used. Both are exposed so they can be compared directly.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels_py as python_backend

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

BACKEND = "compiled" if compiled_backend is not None else "python"


def available_backends() -> list[str]:
    return ["compiled", "python"] if compiled_backend is not None else ["python"]


def _module(backend: str | None):
    name = backend or BACKEND
    if name == "compiled":
        if compiled_backend is None:
            raise RuntimeError("compiled kernel is not available; rebuild the package")
        return compiled_backend
    if name == "python":
        return python_backend
    raise ValueError(f"unknown backend {name!r}")


def propagate(x0, p0, m, omega0, dt, impulse, stride=1, backend=None):
    """Advance a harmonic oscillator through a train of momentum kicks.

    Each step applies the exact harmonic flow over ``dt`` and then adds
    ``impulse[i]`` to the momentum. Returns ``(energies, x, p)`` where
    ``energies`` holds E at step 0 and every ``stride`` steps thereafter.
    """
    impulse = np.ascontiguousarray(impulse, dtype=np.float64)
    theta = omega0 * dt
    c, s = math.cos(theta), math.sin(theta)
    return _module(backend).propagate(
        float(x0), float(p0), float(m), float(omega0), c, s, impulse, int(stride)
    )
