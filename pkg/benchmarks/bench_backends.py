"""Benchmark the compiled kernel core against the pure-numpy fallback.

Times the raw array kernels (the hot loop of every quadrature panel) and
one full parameter-point evaluation through each backend.  Run from the
repository root:

    python benchmarks/bench_backends.py [N]

where N is the array length for the kernel micro-benchmarks (default 2e6).
"""

import sys
import time

import numpy as np

from cosmoharvest import (DetectorPair, DetectorParams, QuadratureConfig,
                          SizePolicy, backend, de_sitter, evaluate)
from cosmoharvest import _kern_np

try:
    from cosmoharvest import _kern_cy
except ImportError:
    _kern_cy = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_arrays(n):
    rng = np.random.default_rng(0)
    x = np.ascontiguousarray(rng.uniform(-40.0, 40.0, n))
    de = np.ascontiguousarray(rng.uniform(-5.0, 5.0, n))
    sig = np.ascontiguousarray(rng.uniform(0.05, 2.0, n))
    cases = [
        ("dawson", lambda impl: impl.dawson(x)),
        ("kernel_cross", lambda impl: impl.kernel_cross(de, 2.0, sig)),
        ("kernel_self", lambda impl: impl.kernel_self(de, sig)),
        ("kernel_minus", lambda impl: impl.kernel_minus(de, 2.0, sig)),
    ]
    rows = []
    for name, call in cases:
        t_pure = best_of(lambda: call(_kern_np))
        if _kern_cy is not None:
            t_fast = best_of(lambda: call(_kern_cy))
            rows.append((name, t_pure, t_fast))
        else:
            rows.append((name, t_pure, None))
    return rows


def bench_point():
    det_a = DetectorParams(gap=6.0, t_center=0.0, width=1.0, sigma=0.1,
                           position=(0.0, 0.0, 0.0), policy=SizePolicy.COMOVING)
    det_b = DetectorParams(gap=6.0, t_center=2.0, width=1.0, sigma=0.1,
                           position=(2.0, 0.0, 0.0), policy=SizePolicy.COMOVING)
    pair = DetectorPair(det_a, det_b)
    model = de_sitter(0.1)
    cfg = QuadratureConfig()

    def run():
        evaluate(pair, model, cfg)

    saved = backend.impl
    try:
        backend.impl = _kern_np
        run()  # warm
        t_pure = best_of(run, repeats=3)
        t_fast = None
        if _kern_cy is not None:
            backend.impl = _kern_cy
            run()
            t_fast = best_of(run, repeats=3)
    finally:
        backend.impl = saved
    return t_pure, t_fast


def main():
    n = int(float(sys.argv[1])) if len(sys.argv) > 1 else 2_000_000
    if _kern_cy is None:
        print("compiled backend not built; timing the pure backend only\n")
    print(f"array kernels, n = {n}:")
    print(f"{'function':<14} {'pure [ms]':>10} {'compiled [ms]':>14} {'speedup':>8}")
    for name, t_pure, t_fast in bench_arrays(n):
        if t_fast is None:
            print(f"{name:<14} {t_pure * 1e3:>10.1f} {'-':>14} {'-':>8}")
        else:
            print(f"{name:<14} {t_pure * 1e3:>10.1f} {t_fast * 1e3:>14.1f} "
                  f"{t_pure / t_fast:>7.1f}x")
    t_pure, t_fast = bench_point()
    print("\nfull parameter-point evaluation (adaptive quadrature included):")
    if t_fast is None:
        print(f"pure {t_pure * 1e3:.0f} ms")
    else:
        print(f"pure {t_pure * 1e3:.0f} ms   compiled {t_fast * 1e3:.0f} ms   "
              f"speedup {t_pure / t_fast:.2f}x")


if __name__ == "__main__":
    main()
