"""Hot inner loops for the direct principal-value summation.

The production path applies the jump kernel as an FFT convolution
(operators.CauchyKernel); the direct O(N*M) summation here is the
reference realization used for equivalence checks and small grids.

It is numba-compiled when numba is importable. Set
``CAUCHY_SPECTRA_BACKEND=numpy`` to force the pure-numpy fallback
(benchmarks/bench_kernels.py compares the two).
"""

import os

import numpy as np

BACKEND = os.environ.get("CAUCHY_SPECTRA_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ValueError(
        f"CAUCHY_SPECTRA_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")


def _direct_sum_loops(values, m_max, s_total, dx):
    n = values.size
    cap = m_max if m_max < n - 1 else n - 1
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for m in range(1, cap + 1):
            s = 0.0
            j = i - m
            if j >= 0:
                s += values[j]
            j = i + m
            if j < n:
                s += values[j]
            acc += s / (m * m)
        out[i] = (2.0 * s_total * values[i] - acc) / (np.pi * dx)
    return out


def _direct_sum_numpy(values, m_max, s_total, dx):
    n = values.size
    cap = min(m_max, n - 1)
    acc = np.zeros(n)
    for m in range(1, cap + 1):
        w = 1.0 / (m * m)
        acc[m:] += w * values[:-m]
        acc[:-m] += w * values[m:]
    return (2.0 * s_total * values - acc) / (np.pi * dx)


if BACKEND == "numba":
    try:
        from numba import njit
        direct_sum = njit(cache=True)(_direct_sum_loops)
    except ImportError:
        BACKEND = "numpy"
        direct_sum = _direct_sum_numpy
else:
    direct_sum = _direct_sum_numpy
