#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against the pure-numpy/python fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--n 2000000]

The same workloads run on both builds and the outputs are cross-checked, so
this doubles as an end-to-end agreement test of the two paths.  To force the
whole package onto the fallback path instead, set TRAPKICK_DISABLE_NUMBA=1.
"""

import argparse
import math
import time

import numpy as np

from trapkick import _kernels


def timeit(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mc(n):
    rng = np.random.default_rng(0)
    vmag = rng.uniform(50.0, 5e3, n)
    vhatz = rng.uniform(-1.0, 1.0, n)
    u = rng.random(n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    args = (2.307e-31, 4.38e-29, 9.109e-31, 48.0, -1.0, 1e-12)
    out = {}
    rows = []
    builds = [("numpy", _kernels.mc_events_numpy)]
    if _kernels.NUMBA_ENABLED:
        builds.append(("numba", _kernels.mc_events_jit))
    for name, fn in builds:
        dp, dpz, w = np.empty(n), np.empty(n), np.empty(n)
        fn(vmag[:64], vhatz[:64], u[:64], phi[:64], *args,
           dp[:64], dpz[:64], w[:64])  # warm/compile
        dt = timeit(lambda: fn(vmag, vhatz, u, phi, *args, dp, dpz, w))
        out[name] = dp.copy()
        rows.append((f"mc_events[{name}]", dt, n / dt / 1e6))
    if len(out) == 2:
        assert np.allclose(out["numba"], out["numpy"], rtol=5e-14, atol=0.0)
    return rows


def bench_flyby():
    y0 = np.zeros(7)
    kappa = 1e-8
    atol = 1e-10 * np.array([1e-6] * 3 + [3e-8] * 3 + [1e-16])
    args = (y0, -50.0, 50.0, 10.0, kappa, 1e-10, atol, 1e-3, 5_000_000)
    rows = []
    finals = {}
    builds = [("python", _kernels.flyby_rk45_numpy)]
    if _kernels.NUMBA_ENABLED:
        builds.append(("numba", _kernels.flyby_rk45_jit))
    for name, fn in builds:
        fn(y0, -1.0, 1.0, 1.0, kappa, 1e-8, atol, 0.0, 10_000)  # warm/compile
        dt = timeit(lambda: fn(*args))
        y, nsteps, _, status = fn(*args)
        assert status == _kernels.STATUS_OK
        finals[name] = y
        rows.append((f"flyby_rk45[{name}]", dt, nsteps / dt / 1e3))
    if len(finals) == 2:
        assert np.allclose(finals["numba"], finals["python"], rtol=1e-6, atol=1e-30)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=float, default=2e6, help="MC events to generate")
    args = parser.parse_args()

    print(f"numba available and enabled: {_kernels.NUMBA_ENABLED}")
    print(f"{'kernel':28s} {'best time':>12s} {'throughput':>18s}")
    for name, dt, rate in bench_mc(int(args.n)):
        print(f"{name:28s} {dt * 1e3:9.2f} ms {rate:12.2f} Mevents/s")
    for name, dt, rate in bench_flyby():
        print(f"{name:28s} {dt * 1e3:9.2f} ms {rate:12.2f} ksteps/s")
    print("cross-path outputs agree")


if __name__ == "__main__":
    main()
