#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python twins.

Usage:
    python benchmarks/bench_kernels.py [--reps N]

Times the Smith reduction (with the left transform, as the sampling
loop uses it) and the Bareiss determinant on matrices drawn from the
same distributions the simulator feeds them.
"""

import argparse
import random
import time

from cuntzmc import _kernels_py

try:
    from cuntzmc import _kernels_cy
except ImportError:
    _kernels_cy = None


def sample_matrices(rng, n, count, shifted=True):
    out = []
    for _ in range(count):
        a = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        if shifted:
            m = [[a[j][i] - (i == j) for j in range(n)] for i in range(n)]
        else:
            m = a
        out.append(m)
    return out


def time_snf(impl, mats, n):
    t0 = time.perf_counter()
    for m in mats:
        impl.snf_kernel([row[:] for row in m], n, n, True, False)
    return time.perf_counter() - t0


def time_det(impl, mats, n):
    t0 = time.perf_counter()
    for m in mats:
        impl.det_kernel([row[:] for row in m], n)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=20)
    args = ap.parse_args()
    rng = random.Random(2024)

    print(f"{'kernel':12s} {'n':>4s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for n in (25, 50, 100):
        reps = max(2, args.reps // (n // 25))
        mats = sample_matrices(rng, n, reps)
        t_py = time_snf(_kernels_py, mats, n) / reps
        if _kernels_cy is not None:
            t_cy = time_snf(_kernels_cy, mats, n) / reps
            print(f"{'snf+U':12s} {n:4d} {t_py*1e3:10.2f}ms {t_cy*1e3:10.2f}ms "
                  f"{t_py/t_cy:7.1f}x")
        else:
            print(f"{'snf+U':12s} {n:4d} {t_py*1e3:10.2f}ms {'n/a':>12s}")
        t_py = time_det(_kernels_py, mats, n) / reps
        if _kernels_cy is not None:
            t_cy = time_det(_kernels_cy, mats, n) / reps
            print(f"{'bareiss det':12s} {n:4d} {t_py*1e3:10.2f}ms {t_cy*1e3:10.2f}ms "
                  f"{t_py/t_cy:7.1f}x")
        else:
            print(f"{'bareiss det':12s} {n:4d} {t_py*1e3:10.2f}ms {'n/a':>12s}")


if __name__ == "__main__":
    main()
