"""Kernel builds: env-flag selection, numba/numpy agreement, integrator correctness."""

import importlib
import math
import os

import numpy as np
import pytest

from trapkick import _kernels


def _random_mc_inputs(n, seed):
    rng = np.random.default_rng(seed)
    vmag = rng.uniform(10.0, 1e6, n)
    vmag[: n // 20] = rng.uniform(0.1, 5.0, n // 20)  # below v_floor
    vhatz = rng.uniform(-1.0, 1.0, n)
    u = rng.random(n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    return vmag, vhatz, u, phi


@pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba off in this environment")
def test_mc_paths_agree():
    n = 50_000
    vmag, vhatz, u, phi = _random_mc_inputs(n, 17)
    outs = []
    for fn in (_kernels.mc_events_jit, _kernels.mc_events_numpy):
        dp, dpz, w = np.empty(n), np.empty(n), np.empty(n)
        for b_cut_fixed in (-1.0, 3e-8):
            fn(vmag, vhatz, u, phi, 2.3e-31, 4.4e-29, 9.1e-31, 48.0,
               b_cut_fixed, 1e-12, dp, dpz, w)
            outs.append((dp.copy(), dpz.copy(), w.copy()))
    for a, b in zip(outs[:2], outs[2:]):
        for x, y in zip(a, b):
            assert np.allclose(x, y, rtol=5e-14, atol=0.0, equal_nan=False)


@pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba off in this environment")
def test_flyby_paths_agree():
    y0 = np.zeros(7)
    atol = 1e-10 * np.array([1e-6] * 3 + [3e-8] * 3 + [1e-16])
    args = (y0, -50.0, 50.0, 0.01, 1e-8, 1e-10, atol, 1e-3, 1_000_000)
    y_jit, n_jit, _, s_jit = _kernels.flyby_rk45_jit(*args)
    y_py, n_py, _, s_py = _kernels.flyby_rk45_numpy(*args)
    assert s_jit == s_py == _kernels.STATUS_OK
    assert np.allclose(y_jit, y_py, rtol=1e-6, atol=1e-30)


def test_flyby_integrator_against_exact_oscillator():
    # kappa = 0, displaced start: flyby_rk45 must track cos/sin exactly
    s = 1.3
    y0 = np.zeros(7)
    y0[2] = 1.0
    t1 = 7.0
    atol = 1e-12 * np.ones(7)
    y, nsteps, nrej, status = _kernels.flyby_rk45(
        y0, 0.0, t1, s, 0.0, 1e-12, atol, 1e-3, 1_000_000
    )
    assert status == _kernels.STATUS_OK
    assert y[2] == pytest.approx(math.cos(s * t1), abs=1e-9)
    assert y[5] == pytest.approx(-s * math.sin(s * t1), abs=1e-9)
    assert abs(y[0]) < 1e-12 and abs(y[1]) < 1e-12


def test_flyby_step_budget_status():
    y0 = np.zeros(7)
    y0[2] = 1.0
    atol = 1e-12 * np.ones(7)
    _, _, _, status = _kernels.flyby_rk45(
        y0, 0.0, 1000.0, 1.0, 0.0, 1e-12, atol, 1e-3, 10
    )
    assert status == _kernels.STATUS_MAX_STEPS


def test_env_flag_selects_numpy_path(monkeypatch):
    monkeypatch.setenv("TRAPKICK_DISABLE_NUMBA", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.NUMBA_ENABLED is False
        assert mod.ACTIVE_KERNEL_PATH == "numpy"
        assert mod.mc_events is mod.mc_events_numpy
        assert mod.flyby_rk45 is mod.flyby_rk45_numpy
    finally:
        monkeypatch.delenv("TRAPKICK_DISABLE_NUMBA")
        importlib.reload(_kernels)


def test_mc_numpy_matches_reference_loop():
    n = 2_000
    vmag, vhatz, u, phi = _random_mc_inputs(n, 19)
    dp_a, dpz_a, w_a = np.empty(n), np.empty(n), np.empty(n)
    dp_b, dpz_b, w_b = np.empty(n), np.empty(n), np.empty(n)
    args = (2.3e-31, 4.4e-29, 9.1e-31, 48.0, -1.0, 1e-12)
    _kernels.mc_events_numpy(vmag, vhatz, u, phi, *args, dp_a, dpz_a, w_a)
    _kernels.mc_events_loop_python(vmag, vhatz, u, phi, *args, dp_b, dpz_b, w_b)
    assert np.allclose(dp_a, dp_b, rtol=1e-14, atol=0.0)
    assert np.allclose(w_a, w_b, rtol=1e-14, atol=0.0)
    assert np.allclose(dpz_a, dpz_b, rtol=1e-13, atol=1e-300)
