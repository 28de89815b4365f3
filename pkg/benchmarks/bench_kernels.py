#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [N]

The same timings can be reproduced end-to-end with the fallback forced via
MNVLAB_DISABLE_NUMBA=1 on any of the CLI commands.
"""

import sys
import time

import numpy as np

from mnvlab import kernels


def time_fn(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    rng = np.random.default_rng(0)
    x = rng.uniform(-30.0, 30.0, n)
    y = rng.uniform(-30.0, 30.0, n)
    dt = 0.7

    pairs = [
        ("enneper_u_q", kernels._enneper_u_q_numpy,
         kernels._enneper_u_q_jit if kernels.BACKEND == "numba" else None),
        ("enneper_fields", kernels._enneper_fields_numpy,
         kernels._enneper_fields_jit if kernels.BACKEND == "numba" else None),
        ("enneper_det", kernels._enneper_det_numpy,
         kernels._enneper_det_jit if kernels.BACKEND == "numba" else None),
    ]

    print(f"N = {n}, backend selected: {kernels.BACKEND}")
    print(f"{'kernel':<16} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}")
    for name, np_fn, jit_fn in pairs:
        t_np = time_fn(np_fn, x, y, dt)
        if jit_fn is None:
            print(f"{name:<16} {1e3 * t_np:12.2f} {'n/a':>12} {'n/a':>9}")
            continue
        jit_fn(x[:16], y[:16], dt)  # compile outside the timing
        t_jit = time_fn(jit_fn, x, y, dt)
        print(f"{name:<16} {1e3 * t_np:12.2f} {1e3 * t_jit:12.2f} {t_np / t_jit:8.2f}x")


if __name__ == "__main__":
    main()
