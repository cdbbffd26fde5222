"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py

Times the twisted-product kernel at several support sizes and the orbit
average at several horizons. The compiled backend is skipped with a note
if the extension is not built.
"""

import timeit

import numpy as np

from anosovlab import _kernels_py as pure

try:
    from anosovlab import _kernels_c as compiled
except ImportError:
    compiled = None

GAMMA = 0.19634954084936207  # pi/16


def product_inputs(support, seed=0):
    rng = np.random.default_rng(seed)
    nu_a = np.ascontiguousarray(rng.integers(-30, 31, size=(support, 2)), dtype=np.int64)
    nu_b = np.ascontiguousarray(rng.integers(-30, 31, size=(support, 2)), dtype=np.int64)
    ca = np.ascontiguousarray(rng.standard_normal(support) + 1j * rng.standard_normal(support))
    cb = np.ascontiguousarray(rng.standard_normal(support) + 1j * rng.standard_normal(support))
    return nu_a, ca, nu_b, cb


def best_of(fn, repeat=5, number=1):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_product():
    print("twisted product (support x support term pairs)")
    print(f"{'support':>8} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for support in (8, 32, 128, 512):
        args = product_inputs(support)
        t_pure = best_of(lambda: pure.weyl_product(*args, GAMMA, 1e-15))
        if compiled is None:
            print(f"{support:>8} {t_pure * 1e3:>10.3f}ms {'n/a':>12} {'':>9}")
            continue
        t_comp = best_of(lambda: compiled.weyl_product(*args, GAMMA, 1e-15))
        print(f"{support:>8} {t_pure * 1e3:>10.3f}ms {t_comp * 1e3:>10.3f}ms "
              f"{t_pure / t_comp:>8.1f}x")


def bench_birkhoff():
    print()
    print("orbit average (N map iterations)")
    print(f"{'N':>8} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for n in (1_000, 10_000, 100_000):
        t_pure = best_of(lambda: pure.birkhoff_sum(1, 1, 1, 2, 0.3123, 0.7345, 1, 0, n),
                         repeat=3)
        if compiled is None:
            print(f"{n:>8} {t_pure * 1e3:>10.3f}ms {'n/a':>12} {'':>9}")
            continue
        t_comp = best_of(lambda: compiled.birkhoff_sum(1, 1, 1, 2, 0.3123, 0.7345, 1, 0, n),
                         repeat=3)
        print(f"{n:>8} {t_pure * 1e3:>10.3f}ms {t_comp * 1e3:>10.3f}ms "
              f"{t_pure / t_comp:>8.1f}x")


if __name__ == "__main__":
    if compiled is None:
        print("extension anosovlab._kernels_c not built; timing the fallback only\n")
    bench_product()
    bench_birkhoff()
