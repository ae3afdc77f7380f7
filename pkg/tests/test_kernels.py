import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from epimatch.kernels import _numba, _numpy
from epimatch.sampling import sample

ECONS, _ = sample(40, seed=99)


@pytest.mark.parametrize("p", ECONS[:20], ids=lambda p: f"tH={p.theta_H:.3f}")
def test_grid_kernels_agree(p):
    args = p.kernel_args
    grid = np.linspace(p.Y_L, p.Y_H, 2001)
    np.testing.assert_allclose(_numba.delta_grid(*args, grid), _numpy.delta_grid(*args, grid),
                               rtol=0, atol=1e-15)
    np.testing.assert_allclose(_numba.w_grid(*args, grid), _numpy.w_grid(*args, grid),
                               rtol=0, atol=1e-15)


@pytest.mark.parametrize("p", ECONS, ids=lambda p: f"tH={p.theta_H:.3f}")
def test_root_kernels_agree(p):
    args = p.kernel_args
    grid = np.linspace(p.Y_L, p.Y_H, 5000)
    np.testing.assert_allclose(_numba.delta_roots(*args, grid), _numpy.delta_roots(*args, grid),
                               atol=1e-14)
    np.testing.assert_allclose(_numba.residual_minima(*args, grid),
                               _numpy.residual_minima(*args, grid), atol=1e-14)


def test_scalar_kernels_agree():
    for p in ECONS:
        for W in np.linspace(0, 1, 37):
            assert _numba.delta_point(*p.kernel_args, W) == pytest.approx(
                _numpy.delta_point(*p.kernel_args, W), abs=1e-16)
            assert _numba.w_point(*p.kernel_args, W) == pytest.approx(
                _numpy.w_point(*p.kernel_args, W), abs=1e-16)


def test_bisection_reaches_machine_precision():
    # delta for this economy has a root at exactly 0.205
    args = (0.5, 0.5, 0.3, 0.1, 0.31, 0.30)
    for mod in (_numpy, _numba):
        r = mod.bisect_delta(*args, 0.15, 0.25)
        assert abs(r - 0.205) < 1e-15


def test_twopop_kernels_agree():
    pop = (0.5, 0.5, 0.6, 0.1, 0.46, 0.45)
    seeds = np.array([[a, b] for a in np.linspace(0.1, 0.6, 5) for b in np.linspace(0.1, 0.6, 5)])
    Wa, da, ia = _numba.twopop_iterate(pop, pop, 1.0, 1.0, seeds, 0.5, 1e-12, 5000)
    Wb, db, ib = _numpy.twopop_iterate(pop, pop, 1.0, 1.0, seeds, 0.5, 1e-12, 5000)
    np.testing.assert_array_equal(da, db)
    np.testing.assert_array_equal(ia, ib)
    np.testing.assert_allclose(Wa, Wb, atol=1e-14)
    grid = np.linspace(0.1, 0.6, 3000)
    np.testing.assert_allclose(_numba.twopop_composite_roots(pop, pop, 1.0, 1.0, grid),
                               _numpy.twopop_composite_roots(pop, pop, 1.0, 1.0, grid), atol=1e-14)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, EPIMATCH_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import epimatch; print(epimatch.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_default_backend_is_numba():
    import epimatch
    if os.environ.get("EPIMATCH_DISABLE_NUMBA"):
        pytest.skip("numba disabled by environment")
    assert epimatch.BACKEND == "numba"


def test_benchmark_runs():
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    res = subprocess.run([sys.executable, str(script), "--repeat", "1", "--number", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0, res.stderr
    assert "delta_roots" in res.stdout and "speedup" in res.stdout
