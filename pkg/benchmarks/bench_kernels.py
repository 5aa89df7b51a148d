#!/usr/bin/env python3
"""Benchmark the jump-kernel application paths.

Compares, per grid size:
  - direct summation, numba-compiled loops
  - direct summation, pure-numpy shift-and-add fallback
  - FFT convolution (the production path)

The package picks numba automatically when importable; setting
CAUCHY_SPECTRA_BACKEND=numpy forces the fallback at import time. Here both
direct variants are timed side by side in one process.
"""

import time

import numpy as np

from cauchy_spectra import CauchyKernel, Grid
from cauchy_spectra._kernels import _direct_sum_loops, _direct_sum_numpy

try:
    from numba import njit
    direct_numba = njit(cache=True)(_direct_sum_loops)
    HAS_NUMBA = True
except ImportError:
    direct_numba = None
    HAS_NUMBA = False


def timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(n_points, repeats=5):
    a = 10.0
    dx = 2 * a / (n_points - 1)
    grid = Grid(a, dx)
    kernel = CauchyKernel(grid)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(grid.n_points)

    rows = {}
    rows["fft"] = timeit(lambda: kernel.apply_to_array(v, method="fft"), repeats)
    rows["numpy-direct"] = timeit(
        lambda: _direct_sum_numpy(v, kernel.m_max, kernel.s_total, grid.dx), repeats)
    if HAS_NUMBA:
        direct_numba(v, kernel.m_max, kernel.s_total, grid.dx)  # JIT warmup
        rows["numba-direct"] = timeit(
            lambda: direct_numba(v, kernel.m_max, kernel.s_total, grid.dx), repeats)

    ref = kernel.apply_to_array(v, method="direct")
    fast = kernel.apply_to_array(v, method="fft")
    rel = np.max(np.abs(fast - ref)) / np.max(np.abs(ref))
    return rows, rel


def main():
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'N':>8} {'fft (ms)':>10} {'numpy (ms)':>11} {'numba (ms)':>11} "
          f"{'numba/np':>9} {'fft rel.dev':>12}")
    for n in (501, 1001, 2001, 4001, 8001):
        rows, rel = bench(n)
        numba_ms = rows.get("numba-direct")
        speed = (rows["numpy-direct"] / numba_ms) if numba_ms else float("nan")
        print(f"{n:>8} {rows['fft'] * 1e3:>10.3f} {rows['numpy-direct'] * 1e3:>11.3f} "
              f"{(numba_ms or float('nan')) * 1e3:>11.3f} {speed:>8.1f}x {rel:>12.2e}")


if __name__ == "__main__":
    main()
