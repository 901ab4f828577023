import os
import subprocess
import sys

import numpy as np
import pytest

import oracles
from relmaser import _kernels
from relmaser.dynamics import EngineConfig
from relmaser.thermo import performance


@pytest.fixture(scope="module")
def grid():
    rng = np.random.default_rng(7)
    n = 4000
    return dict(
        omega_h=rng.uniform(0.01, 10, n),
        omega_c=rng.uniform(0.01, 10, n),
        beta_h=10 ** rng.uniform(-2, 1, n),
        beta_c=10 ** rng.uniform(-2, 1, n),
        u_h=rng.uniform(-3, 3, n),
        u_c=rng.uniform(-3, 3, n),
        gamma_h=rng.uniform(0.1, 2, n),
        gamma_c=rng.uniform(0.1, 2, n),
        xi=rng.uniform(0.0, 5, n),
    )


def test_backends_agree_on_occupation():
    x = np.geomspace(1e-5, 200, 300)[:, None]
    u = np.concatenate([[0.0, 5e-7, 2e-6, 5e-4, 2e-3], np.linspace(-6, 6, 41)])[None, :]
    a = _kernels.occupation_array(x, u, backend="numba")
    b = _kernels.occupation_array(x, u, backend="numpy")
    assert a.shape == b.shape == (300, 46)
    # The compiled and numpy libm differ in the last bits; cancellation amplifies that.
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)


def test_backends_agree_on_fluxes(grid):
    a = _kernels.steady_fluxes(**grid, backend="numba")
    b = _kernels.steady_fluxes(**grid, backend="numpy")
    assert a.shape == (6, 4000)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)


def test_flux_kernel_matches_scalar_route(grid):
    out = _kernels.steady_fluxes(**grid)
    for i in range(0, 4000, 97):
        cfg = EngineConfig.from_values(**{k: float(v[i]) for k, v in grid.items()})
        perf = performance(cfg)
        assert out[0, i] == pytest.approx(perf.power, rel=1e-12, abs=1e-300)
        assert out[1, i] == pytest.approx(perf.q_hot, rel=1e-12, abs=1e-300)
        assert out[2, i] == pytest.approx(perf.q_cold, rel=1e-12, abs=1e-300)


def test_occupation_array_matches_mpmath():
    xs = [1e-3, 0.4, 3.0, 30.0]
    us = [0.0, 3e-4, 0.5, 2.5]
    got = _kernels.occupation_array(np.array(xs)[:, None], np.array(us)[None, :])
    for i, x in enumerate(xs):
        for j, u in enumerate(us):
            assert got[i, j] == pytest.approx(float(oracles.rel_occupation(x, u)), rel=1e-11)


def test_broadcasting_scalars():
    out = _kernels.steady_fluxes(10.0, np.linspace(1, 9, 5), 0.4, 0.8, 0.0, 1.0, 1.0, 1.0, 1.0)
    assert out.shape == (6, 5)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.occupation_array(1.0, 0.0, backend="cuda")


def test_log1mexp_branches():
    for y in [1e-12, 0.1, 0.69, 0.7, 2.0, 40.0]:
        want = float(oracles.mp.log(1 - oracles.mp.exp(-oracles.mp.mpf(y))))
        assert _kernels.log1mexp(y) == pytest.approx(want, rel=1e-14)


def test_env_flag_selects_numpy():
    code = "from relmaser import _kernels as k; print(k.USE_NUMBA, k._resolve(None))"
    env = dict(os.environ, RELMASER_NUMBA="0")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.split() == ["False", "numpy"]


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
def test_default_is_numba_when_available():
    env = {k: v for k, v in os.environ.items() if k != "RELMASER_NUMBA"}
    code = "from relmaser import _kernels as k; print(k._resolve(None))"
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "numba"
