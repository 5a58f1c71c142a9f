# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loop for the driven harmonic oscillator.

Must stay operation-for-operation identical to ``_kernels_py.propagate`` so
both backends give bit-identical trajectories (built without FMA contraction).
"""

import numpy as np


def propagate(double x, double p, double m, double omega0, double c, double s,
              const double[::1] impulse, Py_ssize_t stride):
    cdef Py_ssize_t n = impulse.shape[0]
    cdef Py_ssize_t n_out = n // stride + 1
    out = np.empty(n_out, dtype=np.float64)
    cdef double[::1] e = out
    cdef double a = s / (m * omega0)
    cdef double b = m * omega0 * s
    cdef double inv2m = 0.5 / m
    cdef double half_k = 0.5 * m * omega0 * omega0
    cdef double xn
    cdef Py_ssize_t i, j = 0
    with nogil:
        e[0] = p * p * inv2m + half_k * x * x
        for i in range(n):
            xn = c * x + a * p
            p = c * p - b * x
            p = p + impulse[i]
            x = xn
            if (i + 1) % stride == 0:
                j += 1
                e[j] = p * p * inv2m + half_k * x * x
    return out, x, p
