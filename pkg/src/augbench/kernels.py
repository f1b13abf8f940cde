"""Hot numeric kernels: RBF Gram matrices and the SMO dual solver.

The accelerated path compiles the loop kernels with numba; setting
AUGBENCH_NO_NUMBA=1 (or numba being absent) selects a pure-NumPy
fallback instead. Both paths are always importable by name so they can
be benchmarked against each other (see benchmarks/bench_kernels.py).

The SMO working-pair selection uses an inline 31-bit LCG rather than a
library RNG so the compiled and interpreted paths draw identical pair
sequences from the same seed.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("AUGBENCH_NO_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via AUGBENCH_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

_ALPHA_STEP_MIN = 1e-5  # updates smaller than this are treated as no progress


def _rbf_gram_impl(X: np.ndarray, gamma: float) -> np.ndarray:
    n, d = X.shape
    K = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        K[i, i] = 1.0
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                diff = X[i, k] - X[j, k]
                s += diff * diff
            v = np.exp(-gamma * s)
            K[i, j] = v
            K[j, i] = v
    return K


def _rbf_cross_gram_impl(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    n, d = A.shape
    m = B.shape[0]
    K = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(d):
                diff = A[i, k] - B[j, k]
                s += diff * diff
            K[i, j] = np.exp(-gamma * s)
    return K


def _smo_solve_impl(
    K: np.ndarray,
    y: np.ndarray,
    C: float,
    tol: float,
    max_passes: int,
    seed: int,
) -> tuple[np.ndarray, float]:
    """Solve the soft-margin dual on a precomputed Gram matrix.

    Sweeps all points, pairing each KKT violator with a pseudo-random
    partner, until a sweep finds no violation or max_passes sweeps
    elapse. Returns (alpha, bias).
    """
    n = y.shape[0]
    alpha = np.zeros(n, dtype=np.float64)
    ay = np.zeros(n, dtype=np.float64)  # alpha * y, kept in sync
    b = 0.0
    state = seed % 2147483647
    if state < 1:
        state += 1
    sweeps = 0
    while sweeps < max_passes:
        violations = 0
        for i in range(n):
            e_i = np.dot(ay, K[i]) + b - y[i]
            r_i = y[i] * e_i
            if not ((r_i < -tol and alpha[i] < C) or (r_i > tol and alpha[i] > 0.0)):
                continue
            violations += 1
            state = (1103515245 * state + 12345) % 2147483648
            j = state % (n - 1)
            if j >= i:
                j += 1
            e_j = np.dot(ay, K[j]) + b - y[j]
            ai_old = alpha[i]
            aj_old = alpha[j]
            if y[i] != y[j]:
                lo = max(0.0, aj_old - ai_old)
                hi = min(C, C + aj_old - ai_old)
            else:
                lo = max(0.0, ai_old + aj_old - C)
                hi = min(C, ai_old + aj_old)
            if lo == hi:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0.0:
                continue
            aj = aj_old - y[j] * (e_i - e_j) / eta
            if aj > hi:
                aj = hi
            elif aj < lo:
                aj = lo
            if abs(aj - aj_old) < _ALPHA_STEP_MIN:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            alpha[i] = ai
            alpha[j] = aj
            ay[i] = ai * y[i]
            ay[j] = aj * y[j]
            b1 = b - e_i - y[i] * (ai - ai_old) * K[i, i] - y[j] * (aj - aj_old) * K[i, j]
            b2 = b - e_j - y[i] * (ai - ai_old) * K[i, j] - y[j] * (aj - aj_old) * K[j, j]
            if 0.0 < ai < C:
                b = b1
            elif 0.0 < aj < C:
                b = b2
            else:
                b = 0.5 * (b1 + b2)
        sweeps += 1
        if violations == 0:
            break
    return alpha, b


def rbf_gram_numpy(X: np.ndarray, gamma: float) -> np.ndarray:
    """Vectorized Gram matrix; unit diagonal pinned exactly."""
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    K = np.exp(-gamma * d2)
    np.fill_diagonal(K, 1.0)
    return K


def rbf_cross_gram_numpy(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    d2 = (
        np.einsum("ij,ij->i", A, A)[:, None]
        + np.einsum("ij,ij->i", B, B)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


# Interpreted reference for the solver; the numpy dots keep it usable at
# desk scale even without numba.
smo_solve_python = _smo_solve_impl

if NUMBA_ENABLED:
    rbf_gram = njit(cache=True)(_rbf_gram_impl)
    rbf_cross_gram = njit(cache=True)(_rbf_cross_gram_impl)
    smo_solve = njit(cache=True)(_smo_solve_impl)
else:
    rbf_gram = rbf_gram_numpy
    rbf_cross_gram = rbf_cross_gram_numpy
    smo_solve = smo_solve_python


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs so timings exclude it."""
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    y = np.array([1.0, 1.0, -1.0, -1.0])
    K = rbf_gram(X, 0.5)
    rbf_cross_gram(X[:2], X, 0.5)
    smo_solve(K, y, 1.0, 1e-3, 5, 1)
