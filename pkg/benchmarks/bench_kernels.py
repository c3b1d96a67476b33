#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Micro-benchmarks cover the three hot kernels (basis tables, series
evaluation, Gauss rule construction); --solve adds an end-to-end convergence
study run under each backend (forced via GALERKIN_TIME_KERNELS in a
subprocess).  Usage:

    python benchmarks/bench_kernels.py [--solve] [--repeat R]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from galerkin_time._kernels import available_backends, get_backend


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def micro(repeat):
    rng = np.random.default_rng(0)
    x_small = rng.uniform(-1, 1, 8)
    x_large = rng.uniform(-1, 1, 20_000)
    coeffs = rng.standard_normal((6, 1))

    cases = [
        ("legendre_table k=5, 8 pts x2000", lambda b: [b.legendre_table(5, x_small) for _ in range(2000)]),
        ("legendre_table k=12, 20k pts", lambda b: b.legendre_table(12, x_large)),
        ("legendre_series nc=6, 20k pts", lambda b: b.legendre_series(coeffs, x_large)),
        ("gauss_nodes_weights m=6 x500", lambda b: [b.gauss_nodes_weights(6) for _ in range(500)]),
        ("gauss_nodes_weights m=64", lambda b: b.gauss_nodes_weights(64)),
    ]

    backends = {name: get_backend(name) for name in available_backends()}
    print(f"backends: {', '.join(backends)}  (repeat={repeat}, best-of shown)")
    header = f"{'case':<36}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, fn in cases:
        times = [_time(lambda b=b: fn(b), repeat) for b in backends.values()]
        row = f"{label:<36}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>9.1f}x"
        print(row)


def end_to_end():
    code = (
        "import time, galerkin_time as gt;"
        "t0 = time.perf_counter();"
        "[gt.convergence_study(gt.get_problem(p), gt.SolverConfig(k=3), 5, 4)"
        " for p in ('decay', 'riccati')];"
        "print(f'{gt.KERNEL_BACKEND}: {time.perf_counter() - t0:.3f}s')"
    )
    for name in available_backends():
        env = dict(os.environ, GALERKIN_TIME_KERNELS=name)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--solve", action="store_true", help="also time a full convergence study per backend")
    args = parser.parse_args()
    micro(args.repeat)
    if args.solve:
        print(flush=True)
        end_to_end()


if __name__ == "__main__":
    main()
