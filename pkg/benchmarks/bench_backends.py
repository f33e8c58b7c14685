"""Benchmark the compiled kernels against their pure-numpy fallbacks.

Times the three hot paths (plane-scan bounds, pencil thresholds, triangle
sweep) on identical random workloads and prints per-call timings and the
speedup of the compiled backend. Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --ellipsoids 50 --grid 4000
"""
import argparse
import time

import numpy as np

from steerell import kernels, sampling


def fib_sphere(n):
    """Deterministic quasi-uniform unit normals (Fibonacci sphere)."""
    i = np.arange(n) + 0.5
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def time_backend(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_scan_bounds(rng, n_ell, n_normals, repeat):
    normals = fib_sphere(n_normals)
    cases = [sampling.random_tangent_ellipsoid(rng) for _ in range(n_ell)]
    times = {}
    for backend in backends():
        def run():
            for ell, p in cases:
                kernels.scan_bounds(ell.inverse_shape_matrix(), ell.centre, p, normals, backend=backend)
        run()  # warm up (numba compiles on first call)
        times[backend] = time_backend(run, repeat)
    report("scan_bounds", f"{n_ell} ellipsoids x {n_normals} planes", times, n_ell)
    return times


def bench_scan_pencil(rng, n_ell, n_angles, repeat):
    ts = np.linspace(0.0, np.pi, n_angles, endpoint=False)
    cases = []
    while len(cases) < n_ell:
        ell, p = sampling.random_tangent_ellipsoid(rng)
        b = sampling.random_interior_point(rng, ell)
        d = b - p
        nd = np.linalg.norm(d)
        if nd < 1e-2:
            continue
        d /= nd
        seed_v = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = seed_v - (seed_v @ d) * d
        e1 /= np.linalg.norm(e1)
        cases.append((ell, p, b, e1, np.cross(d, e1)))
    times = {}
    for backend in backends():
        def run():
            for ell, p, b, e1, e2 in cases:
                kernels.scan_pencil(ell.inverse_shape_matrix(), ell.centre, p, b, e1, e2, ts, backend=backend)
        run()
        times[backend] = time_backend(run, repeat)
    report("scan_pencil", f"{n_ell} pencils x {n_angles} angles", times, n_ell)
    return times


def bench_triangle_sweep(rng, n_cases, grid, repeat):
    cases = [
        tuple(rng.uniform(-1.0, 1.0, 2) for _ in range(5))
        for _ in range(n_cases)
    ]
    times = {}
    for backend in backends():
        def run():
            for sp1, c1, sm1, c2, sm0 in cases:
                kernels.triangle_sweep(sp1, c1, sm1, c2, sm0, grid, backend=backend)
        run()
        times[backend] = time_backend(run, repeat)
    report("triangle_sweep", f"{n_cases} sweeps x grid {grid}", times, n_cases)
    return times


def backends():
    return ("numba", "numpy") if kernels.HAVE_NUMBA else ("numpy",)


def report(name, workload, times, n_calls):
    print(f"\n{name}  ({workload}, best of repeats)")
    for backend, total in times.items():
        print(f"  {backend:<6} {total * 1e3:9.2f} ms total  {total / n_calls * 1e6:9.1f} us/call")
    if "numba" in times:
        print(f"  speedup numba vs numpy: {times['numpy'] / times['numba']:.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ellipsoids", type=int, default=20, help="ellipsoids per scan benchmark")
    ap.add_argument("--normals", type=int, default=64800, help="plane normals per scan_bounds call")
    ap.add_argument("--angles", type=int, default=360, help="pencil angles per scan_pencil call")
    ap.add_argument("--sweeps", type=int, default=200, help="triangle sweeps")
    ap.add_argument("--grid", type=int, default=2000, help="triangle sweep grid")
    ap.add_argument("--repeat", type=int, default=3, help="timing repeats (best is kept)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"numba available: {kernels.HAVE_NUMBA}  (default backend: {kernels.get_backend()})")
    rng = np.random.default_rng(args.seed)
    bench_scan_bounds(rng, args.ellipsoids, args.normals, args.repeat)
    bench_scan_pencil(rng, args.ellipsoids, args.angles, args.repeat)
    bench_triangle_sweep(rng, args.sweeps, args.grid, args.repeat)


if __name__ == "__main__":
    main()
