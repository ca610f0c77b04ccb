"""Compare the compiled and pure-Python t-integral kernels.

Usage: python benchmarks/bench_kernels.py [--points N] [--repeat R]

The workload evaluates the full-mode t-integral on a dense q grid over a wide
t window with a tight tolerance, so most points need many adaptive panels.
Both backends must agree to 1e-12 before timings are reported.
"""

import argparse
import time

import numpy as np

from hybriddj import kernels


def workload(n_points):
    qs = np.linspace(-4.0, 4.0, n_points)
    return dict(qs=qs, lo=0.02, hi=3.0, s=1.5, full=True, epsabs=1e-13)


def best_time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    w = workload(args.points)
    backends = kernels.available_backends()
    timings = {}
    values = {}
    for name, mod in backends.items():
        call = lambda mod=mod: mod.t_integral_many(w["qs"], w["lo"], w["hi"], w["s"], w["full"], w["epsabs"])
        timings[name], (vals, errs, ok) = best_time(call, args.repeat)
        if not ok:
            raise SystemExit(f"{name} backend failed to converge")
        values[name] = vals

    print(f"active backend: {kernels.BACKEND}; {args.points} points, best of {args.repeat}")
    for name, t in timings.items():
        print(f"  {name:7s} {t * 1e3:10.2f} ms   {t / args.points * 1e6:8.2f} us/point")
    if "cython" in values:
        diff = float(np.max(np.abs(values["cython"] - values["python"])))
        print(f"  max |cython - python| = {diff:.3e}")
        if diff > 1e-12:
            raise SystemExit("backends disagree")
        print(f"  speedup: {timings['python'] / timings['cython']:.1f}x")
    else:
        print("  compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
