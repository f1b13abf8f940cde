"""Benchmark the accelerated kernels against the pure-NumPy fallback.

Times RBF Gram construction and SMO solves on a synthetic
sentence-classification-shaped workload, the same hot path a full
experiment grid spends its time in. The JIT warm-up run is excluded
from timing. If numba is absent or disabled (AUGBENCH_NO_NUMBA=1), only
the pure path is measured.

Run:

    python benchmarks/bench_kernels.py
"""

import statistics
import time

import numpy as np

from augbench import kernels


def make_problem(n=1500, dim=32, seed=0):
    rng = np.random.default_rng(seed)
    half = n // 2
    X = np.vstack([
        rng.normal(0.0, 1.0, (half, dim)) + 0.8,
        rng.normal(0.0, 1.0, (n - half, dim)) - 0.8,
    ])
    y = np.concatenate([np.ones(half), -np.ones(n - half)])
    return np.ascontiguousarray(X), y


def time_calls(fn, repeats=3):
    durations = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        durations.append(time.perf_counter() - t0)
    return statistics.mean(durations), statistics.pstdev(durations), result


def main():
    X, y = make_problem()
    gamma = 1.0 / (X.shape[1] * X.var())
    print(f"problem: {X.shape[0]} points, dim {X.shape[1]}, gamma {gamma:.4f}")
    print(f"numba path enabled: {kernels.NUMBA_ENABLED}")

    if kernels.NUMBA_ENABLED:
        print("[warmup] compiling jitted kernels (not timed)")
        kernels.warmup()

    rows = []

    mean, std, K_np = time_calls(lambda: kernels.rbf_gram_numpy(X, gamma))
    rows.append(("gram, numpy", mean, std))
    if kernels.NUMBA_ENABLED:
        mean, std, K_jit = time_calls(lambda: kernels.rbf_gram(X, gamma))
        rows.append(("gram, numba", mean, std))
        drift = float(np.abs(K_jit - K_np).max())
        print(f"gram agreement: max |diff| = {drift:.3e}")
        K = K_jit
    else:
        K = K_np

    solve_args = (K, y, 10.0, 1e-3, 200, 12345)
    mean, std, (a_py, b_py) = time_calls(
        lambda: kernels.smo_solve_python(*solve_args), repeats=1
    )
    rows.append(("smo, python+numpy", mean, std))
    if kernels.NUMBA_ENABLED:
        mean, std, (a_jit, b_jit) = time_calls(
            lambda: kernels.smo_solve(*solve_args)
        )
        rows.append(("smo, numba", mean, std))
        same = np.array_equal(a_py, a_jit) and b_py == b_jit
        print(f"smo agreement: identical alphas/bias = {same}")

    print()
    print(f"{'kernel':<22} {'mean(s)':>10} {'std(s)':>9}")
    print("-" * 43)
    for name, mean, std in rows:
        print(f"{name:<22} {mean:>10.4f} {std:>9.4f}")

    if kernels.NUMBA_ENABLED:
        by_name = {name: mean for name, mean, _ in rows}
        print()
        print(f"gram speedup: {by_name['gram, numpy'] / by_name['gram, numba']:.2f}x"
              " (numpy baseline / numba)")
        print(f"smo speedup:  {by_name['smo, python+numpy'] / by_name['smo, numba']:.2f}x"
              " (interpreted / numba)")


if __name__ == "__main__":
    main()
