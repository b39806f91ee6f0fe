"""Benchmark the relaxation kernels: compiled extension vs numpy fallback.

Runs checkerboard SOR sweeps plus energy evaluations on a branched-class
problem of the acceptance grid size and reports per-sweep timings, plus an
end-to-end relax_oracle comparison.

Usage: python benchmarks/bench_kernels.py [--nr 64] [--ntheta 256] [--sweeps 400]
"""

import argparse
import time

import numpy as np

from qdisk._kernels import backends
from qdisk.field import PolarGrid, dirichlet_energy
from qdisk.minimizer import BoundaryTrace, minimize, relax_oracle


def sweep_benchmark(impl, u0, dtheta, sweeps):
    u = u0.copy()
    start = time.perf_counter()
    for _ in range(sweeps):
        impl.gs_sweep(u, dtheta, 0, 1.9)
        impl.gs_sweep(u, dtheta, 1, 1.9)
        impl.gs_center(u)
        impl.gs_energy(u, dtheta)
    elapsed = time.perf_counter() - start
    return elapsed / sweeps, impl.gs_energy(u, dtheta)


def branched_trace(n):
    th = 2 * np.pi * np.arange(n) / n
    cover = np.concatenate([th, th + 2 * np.pi])
    loop = np.stack(
        [np.cos(1.5 * cover) + 0.3 * np.cos(2.5 * cover),
         np.sin(1.5 * cover) + 0.3 * np.sin(2.5 * cover)],
        axis=1,
    )
    return BoundaryTrace.from_values(loop[:n], loop[n:])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nr", type=int, default=64)
    parser.add_argument("--ntheta", type=int, default=256)
    parser.add_argument("--sweeps", type=int, default=400)
    args = parser.parse_args()

    grid = PolarGrid(args.nr, args.ntheta)
    rng = np.random.default_rng(0)
    u0 = rng.normal(size=(grid.n_r + 1, 2 * grid.n_theta, 2))
    u0[0] = u0[0, 0]
    u0 = np.ascontiguousarray(u0)

    impls = backends()
    print(f"grid {args.nr}x{args.ntheta} (double cover, {args.sweeps} sweeps each)")
    per_sweep = {}
    for name, impl in impls.items():
        dt, energy = sweep_benchmark(impl, u0, grid.dtheta, args.sweeps)
        per_sweep[name] = dt
        print(f"  {name:10s} {dt * 1e3:8.3f} ms/sweep   (final energy {energy:.6f})")
    if len(per_sweep) == 2:
        print(f"  speedup: {per_sweep['fallback'] / per_sweep['native']:.1f}x")

    trace = branched_trace(args.ntheta)
    spectral = minimize(trace, grid)
    print(f"\nend-to-end relax_oracle (spectral energy {spectral.energy:.6f}):")
    import qdisk._kernels as kernels

    saved = (kernels.gs_sweep, kernels.gs_center, kernels.gs_energy, kernels.BACKEND)
    try:
        for name, impl in impls.items():
            kernels.gs_sweep = impl.gs_sweep
            kernels.gs_center = impl.gs_center
            kernels.gs_energy = impl.gs_energy
            start = time.perf_counter()
            relaxed = relax_oracle(trace, grid)
            elapsed = time.perf_counter() - start
            gap = abs(dirichlet_energy(relaxed, 1.0) - spectral.energy) / spectral.energy
            print(f"  {name:10s} {elapsed:7.2f} s   relative gap {gap:.2e}")
    finally:
        kernels.gs_sweep, kernels.gs_center, kernels.gs_energy, kernels.BACKEND = saved


if __name__ == "__main__":
    main()
