import os
import subprocess
import sys

import numpy as np

from cauchy_spectra import _kernels

AGREEMENT_SNIPPET = """
import numpy as np
from cauchy_spectra import CauchyKernel, Grid, GridFunction
from cauchy_spectra import _kernels
assert _kernels.BACKEND == {backend!r}, _kernels.BACKEND
g = Grid(2.0, 0.01)
rng = np.random.default_rng(77)
f = GridFunction(g, rng.standard_normal(g.n_points))
k = CauchyKernel(g)
a = k.apply(f, method="direct").values
b = k.apply(f, method="fft").values
assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(b))
print("ok")
"""


def run_with_backend(value):
    env = dict(os.environ)
    if value is None:
        env.pop("CAUCHY_SPECTRA_BACKEND", None)
        expected = "numba"
    else:
        env["CAUCHY_SPECTRA_BACKEND"] = value
        expected = value
    return subprocess.run(
        [sys.executable, "-c", AGREEMENT_SNIPPET.format(backend=expected)],
        env=env, capture_output=True, text=True)


def test_default_backend_is_numba_here():
    # numba is installed in this environment, so the default path uses it
    assert _kernels.BACKEND == os.environ.get("CAUCHY_SPECTRA_BACKEND", "numba")


def test_numpy_fallback_selected_by_env_flag():
    proc = run_with_backend("numpy")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "ok"


def test_numba_backend_agrees_with_fft():
    proc = run_with_backend(None)
    assert proc.returncode == 0, proc.stderr


def test_unknown_backend_rejected_at_import():
    proc = run_with_backend("cython")
    assert proc.returncode != 0
    assert "CAUCHY_SPECTRA_BACKEND" in proc.stderr


def test_both_implementations_match_on_shared_input():
    rng = np.random.default_rng(5)
    v = rng.standard_normal(501)
    got_np = _kernels._direct_sum_numpy(v, 400, 1.2, 0.01)
    got_loops = _kernels._direct_sum_loops(v, 400, 1.2, 0.01)
    assert np.allclose(got_np, got_loops, rtol=1e-13, atol=1e-13)
