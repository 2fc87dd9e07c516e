"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Run: python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from loanscore import gbdt, kernels


def timeit(fn, *args, repeats=5):
    fn(*args)  # warm up (and trigger compilation on the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)

    print(f"numba available and enabled: {kernels.USE_NUMBA}")
    print()
    print(f"{'kernel':<16}{'n':>8}{'m':>5}{'numpy (ms)':>12}"
          f"{'numba (ms)':>12}{'speedup':>9}")

    for n, m in ((1000, 10), (10000, 20), (50000, 20)):
        X = rng.normal(size=(n, m))
        g = rng.normal(size=n)
        h = rng.uniform(0.01, 1.0, size=n)
        t_py = timeit(kernels._best_split_py, X, g, h, 1.0, 0.0, 1.0)
        if kernels.USE_NUMBA:
            t_nb = timeit(kernels._best_split_nb, X, g, h, 1.0, 0.0, 1.0)
            ratio = f"{t_py / t_nb:8.1f}x"
        else:
            t_nb, ratio = float("nan"), "     n/a"
        print(f"{'best_split':<16}{n:>8}{m:>5}{1e3 * t_py:>12.2f}"
              f"{1e3 * t_nb:>12.2f}{ratio:>9}")

    y = None
    for n, m in ((5000, 10), (50000, 10)):
        X = rng.normal(size=(n, m))
        y = (X[:, 0] > 0).astype(np.int64)
        params = gbdt.GbdtParams(n_estimators=50, max_depth=6,
                                 alpha=0.0).validate()
        model = gbdt.fit(X[:2000], y[:2000], params, seed=0)
        args = model.flat_arrays()
        t_py = timeit(kernels._predict_forest_py, *args, X)
        if kernels.USE_NUMBA:
            t_nb = timeit(kernels._predict_forest_nb, *args, X)
            ratio = f"{t_py / t_nb:8.1f}x"
        else:
            t_nb, ratio = float("nan"), "     n/a"
        print(f"{'predict_forest':<16}{n:>8}{m:>5}{1e3 * t_py:>12.2f}"
              f"{1e3 * t_nb:>12.2f}{ratio:>9}")


if __name__ == "__main__":
    main()
