"""Bounded one-dimensional extremum search."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-4,
    max_iter: int = 500,
) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x_star, f(x_star))`` with the bracket shrunk below ``xtol``.
    """
    if not hi > lo:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > xtol and it < max_iter:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x)
