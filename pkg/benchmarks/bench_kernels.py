#!/usr/bin/env python3
"""Benchmark the numba time-stepping kernels against the pure-numpy fallback.

Runs a fixed perturbed-shock window with each backend and reports steps/sec
and the speedup, plus the max deviation between the two solutions (they
implement the identical update, so the difference is rounding only).

Usage: python benchmarks/bench_kernels.py [--t-end 0.5] [--n 2001]
"""

import argparse
import time

import numpy as np

import shocklab as sl
from shocklab import kernels


def run_case(label, params, prof, t_end, backend):
    init = sl.InitialData(prof, amplitude=0.3, width=1.0)
    cfg = sl.SolverConfig(t_end=t_end, output_dt=t_end,
                          frame="co-moving-shift")
    # warm up the JIT so compile time is not billed to the numba backend
    warm = sl.SolverConfig(t_end=1e-3, output_dt=1e-3,
                           frame="co-moving-shift")
    sl.simulate(init, params, warm, backend=backend)
    t0 = time.perf_counter()
    series = sl.simulate(init, params, cfg, backend=backend)
    wall = time.perf_counter() - t0
    # recover the step count from the stable dt
    dx = prof.dx
    p = params.p
    g = np.diff(series.final_state.values) / dx
    maxdiff = max(float(np.max(p * np.abs(g) ** (p - 1.0))), 1e-12) \
        if p != 1.0 else 1.0
    dt = 0.85 * dx * dx / (2.0 * maxdiff)
    steps = int(t_end / dt)
    return series, wall, steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-end", type=float, default=0.5)
    ap.add_argument("--n", type=int, default=2001)
    args = ap.parse_args()

    print(f"numba available: {kernels.NUMBA_AVAILABLE}")
    print(f"active backend (SHOCKLAB_BACKEND): {kernels.active_backend()}")
    print(f"grid n={args.n}, t_end={args.t_end}")
    print("-" * 64)

    for label, p in (("linear viscosity (p=1)", 1.0),
                     ("degenerate viscosity (p=1.5)", 1.5)):
        params = sl.ShockParams(1.0, -1.0, p)
        prof = sl.build_profile(params, -20.0, 20.0, args.n)
        out = {}
        for backend in ("numba", "numpy"):
            if backend == "numba" and not kernels.NUMBA_AVAILABLE:
                continue
            series, wall, steps = run_case(label, params, prof,
                                           args.t_end, backend)
            out[backend] = (series, wall, steps)
            print(f"{label:30s} {backend:6s} {wall:8.3f}s "
                  f"~{steps / wall:10.0f} steps/s")
        if len(out) == 2:
            dev = np.max(np.abs(out["numba"][0].final_state.values
                                - out["numpy"][0].final_state.values))
            speedup = out["numpy"][1] / out["numba"][1]
            print(f"{'':30s} speedup {speedup:6.1f}x   max deviation {dev:.3e}")
        print("-" * 64)


if __name__ == "__main__":
    main()
