"""Time the compiled and pure-Python oscillator kernels on the same kick train.

    python3 benchmarks/bench_kernels.py --steps 200000 --repeat 3
"""

import argparse
import math
import time

import numpy as np

from csltrap import kernels


def best_time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    kicks = np.random.default_rng(args.seed).standard_normal(args.steps) * 1e-22
    m, w = 1e-15, 2 * math.pi
    dt = 1 / (100 * w)
    results = {}
    for backend in kernels.available_backends():
        run = lambda b=backend: kernels.propagate(0.0, 0.0, m, w, dt, kicks, 100, backend=b)  # noqa: E731
        results[backend] = (best_time(run, args.repeat), run())

    print(f"{'backend':<10} {'seconds':>10} {'Msteps/s':>10}")
    for name, (sec, _) in results.items():
        print(f"{name:<10} {sec:>10.4f} {args.steps / sec / 1e6:>10.2f}")
    if len(results) == 2:
        (tc, rc), (tp, rp) = results["compiled"], results["python"]
        same = np.array_equal(rc[0], rp[0]) and rc[1:] == rp[1:]
        print(f"speed-up {tp / tc:.1f}x, outputs bit-identical: {same}")
    else:
        print("compiled kernel not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
