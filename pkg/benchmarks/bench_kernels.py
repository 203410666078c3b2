"""Benchmark the compiled series kernel against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py

Times series_sums over a realistic workload (a log grid of squeeze numbers
at several truncation orders) for whichever compiled backend is installed
and for the pure-Python path, and prints the speedup. Set SFDNOISE_PURE=1
before importing sfdnoise to force the fallback at runtime.
"""

import timeit

import numpy as np

from sfdnoise import kernels


def bench(func, sigma, beta, max_index, repeat=5):
    number = max(1, int(2000 / (max_index + 1)))
    times = timeit.repeat(
        lambda: func(sigma, beta, max_index), number=number, repeat=repeat
    )
    return min(times) / number


def main():
    sigma = np.concatenate([[0.0], np.geomspace(1e-3, 1e4, 200)])
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'max_index':>9}  {'beta':>4}  {'selected':>12}  {'pure':>12}  {'speedup':>8}")
    for max_index in (9, 49, 199):
        for beta in (1.0, 3.0):
            t_sel = bench(kernels.series_sums, sigma, beta, max_index)
            t_py = bench(kernels.series_sums_py, sigma, beta, max_index)
            print(
                f"{max_index:>9}  {beta:>4.1f}  {t_sel * 1e3:>10.3f} ms"
                f"  {t_py * 1e3:>10.3f} ms  {t_py / t_sel:>7.2f}x"
            )


if __name__ == "__main__":
    main()
