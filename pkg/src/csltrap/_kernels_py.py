"""Pure-Python fallback for ``_kernels``; same arithmetic in the same order."""

import numpy as np


def propagate(x, p, m, omega0, c, s, impulse, stride):
    n = len(impulse)
    out = np.empty(n // stride + 1)
    a = s / (m * omega0)
    b = m * omega0 * s
    inv2m = 0.5 / m
    half_k = 0.5 * m * omega0 * omega0
    imp = impulse.tolist()
    e = [p * p * inv2m + half_k * x * x]
    for i in range(n):
        xn = c * x + a * p
        p = c * p - b * x
        p = p + imp[i]
        x = xn
        if (i + 1) % stride == 0:
            e.append(p * p * inv2m + half_k * x * x)
    out[:] = e
    return out, x, p
