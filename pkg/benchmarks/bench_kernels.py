"""Timing comparison of the numba-compiled kernels against the pure-numpy
fallbacks.

Run:  python3 benchmarks/bench_kernels.py [--repeat N]

The same comparison is what MEMORYFLOW_DISABLE_NUMBA=1 switches at import
time; this script exercises both implementations in one process.
"""

import argparse
import time

import numpy as np

from memoryflow import kernels


def timeit(fn, repeat):
    fn()  # warm up (JIT compile / cache touch)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_jacobi(rng, repeat):
    x = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
    h = (x + x.conj().T) / 2.0
    rows = []
    rows.append(("jacobi_eigvals 64x64", "numpy",
                 timeit(lambda: kernels.jacobi_eigvals_numpy(h), repeat)))
    if kernels.HAVE_NUMBA:
        rows.append(("jacobi_eigvals 64x64", "numba",
                     timeit(lambda: kernels.jacobi_eigvals_numba(h), repeat)))
    return rows


def bench_power_average(rng, repeat):
    thetas = rng.uniform(-np.pi, np.pi, 2000)
    weights = rng.uniform(0.0, 1.0, 2000)
    rows = []
    rows.append(("power average 2000 nodes, m=20", "numpy",
                 timeit(lambda: kernels.transfer_power_average_numpy(thetas, weights, 1.0, 0.0, 20), repeat)))
    if kernels.HAVE_NUMBA:
        rows.append(("power average 2000 nodes, m=20", "numba",
                     timeit(lambda: kernels.transfer_power_average_numba(thetas, weights, 1.0, 0.0, 20), repeat)))
    return rows


def bench_convolve(rng, repeat):
    a = rng.normal(size=(81, 3, 3)) + 1j * rng.normal(size=(81, 3, 3))
    b = rng.normal(size=(3, 3, 3)) + 1j * rng.normal(size=(3, 3, 3))
    rows = []
    rows.append(("series convolve deg 40 x deg 1", "numpy",
                 timeit(lambda: kernels.series_convolve_numpy(a, b), repeat)))
    if kernels.HAVE_NUMBA:
        rows.append(("series convolve deg 40 x deg 1", "numba",
                     timeit(lambda: kernels.series_convolve_numba(a, b), repeat)))
    return rows


def bench_walk(repeat):
    rows = []
    rows.append(("walk recursion 500 steps", "numpy",
                 timeit(lambda: kernels.walk_run_numpy(0.6, 0.8j, 500), repeat)))
    if kernels.HAVE_NUMBA:
        rows.append(("walk recursion 500 steps", "numba",
                     timeit(lambda: kernels.walk_run_numba(0.6, 0.8j, 500), repeat)))
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    print(f"active backend: {kernels.BACKEND} (numba available: {kernels.HAVE_NUMBA})")
    rows = []
    rows += bench_jacobi(rng, args.repeat)
    rows += bench_power_average(rng, args.repeat)
    rows += bench_convolve(rng, args.repeat)
    rows += bench_walk(args.repeat)

    by_name = {}
    for name, backend, best in rows:
        by_name.setdefault(name, {})[backend] = best
    width = max(len(n) for n in by_name)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, t in by_name.items():
        numpy_t = t.get("numpy", float("nan"))
        numba_t = t.get("numba")
        if numba_t is None:
            print(f"{name:<{width}}  {numpy_t * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(f"{name:<{width}}  {numpy_t * 1e3:>8.2f}ms  {numba_t * 1e3:>8.2f}ms  "
                  f"{numpy_t / numba_t:>7.1f}x")


if __name__ == "__main__":
    main()
