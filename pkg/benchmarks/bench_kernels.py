"""Compare the numba-jitted kernels against the pure-numpy fallbacks.

Run with the default backend (numba when importable):

    python3 benchmarks/bench_kernels.py

The numpy fallback timings come from the private `_*_np` functions, so a
single process measures both paths. Set DFSUITE_NUMBA=0 to verify the
dispatch itself falls back.
"""
import time

import numpy as np

from dfsuite import kernels

REPEATS = 5


def bench(fn, *args):
    fn(*args)  # warm-up (includes jit compilation)
    best = float("inf")
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"backend: {'numba' if kernels.using_numba() else 'numpy'}")
    print(f"{'kernel':<18} {'numpy':>10} {'dispatch':>10} {'speedup':>8}")

    img = rng.integers(0, 32, size=(512, 512)).astype(np.int64)
    t_np = bench(kernels._glcm_counts_np, img, 1, 1, 32)
    t_disp = bench(kernels.glcm_counts, img, 1, 1, 32)
    print(f"{'glcm_counts':<18} {t_np * 1e3:>8.2f}ms {t_disp * 1e3:>8.2f}ms {t_np / t_disp:>7.1f}x")

    x = rng.normal(size=(8, 8, 64, 64))
    k = rng.normal(size=(16, 8, 3, 3))
    t_np = bench(kernels._conv2d_np, x, k)
    t_disp = bench(kernels.conv2d, x, k)
    print(f"{'conv2d':<18} {t_np * 1e3:>8.2f}ms {t_disp * 1e3:>8.2f}ms {t_np / t_disp:>7.1f}x")

    a = rng.normal(size=(2000, 13))
    t_np = bench(kernels._pairwise_sqdist_np, a)
    t_disp = bench(kernels.pairwise_sqdist, a)
    print(f"{'pairwise_sqdist':<18} {t_np * 1e3:>8.2f}ms {t_disp * 1e3:>8.2f}ms {t_np / t_disp:>7.1f}x")


if __name__ == "__main__":
    main()
