import os
import subprocess
import sys

import numpy as np
import pytest

from augbench import kernels


@pytest.fixture
def random_problem():
    rng = np.random.default_rng(17)
    X = rng.normal(size=(40, 6))
    y = np.where(rng.random(40) > 0.5, 1.0, -1.0)
    if abs(y.sum()) == len(y):  # force both classes
        y[0] = -y[0]
    return X, y


class TestGramAgreement:
    def test_gram_paths_agree(self, random_problem):
        X, _ = random_problem
        K_sel = kernels.rbf_gram(X, 0.6)
        K_np = kernels.rbf_gram_numpy(X, 0.6)
        assert np.allclose(K_sel, K_np, atol=1e-12)

    def test_cross_paths_agree(self, random_problem):
        X, _ = random_problem
        C_sel = kernels.rbf_cross_gram(X[:7], X, 0.6)
        C_np = kernels.rbf_cross_gram_numpy(X[:7], X, 0.6)
        assert np.allclose(C_sel, C_np, atol=1e-12)

    def test_gram_diagonal_is_one(self, random_problem):
        X, _ = random_problem
        for fn in (kernels.rbf_gram, kernels.rbf_gram_numpy):
            assert np.all(np.diag(fn(X, 0.9)) == 1.0)

    def test_gram_symmetric(self, random_problem):
        X, _ = random_problem
        K = kernels.rbf_gram(X, 0.4)
        assert np.array_equal(K, K.T)

    def test_values_in_unit_interval(self, random_problem):
        X, _ = random_problem
        K = kernels.rbf_gram(X, 1.1)
        assert np.all(K > 0.0) and np.all(K <= 1.0)


class TestSmoAgreement:
    def test_selected_matches_python_reference(self, random_problem):
        X, y = random_problem
        K = kernels.rbf_gram_numpy(X, 0.5)
        a1, b1 = kernels.smo_solve(K, y, 10.0, 1e-3, 200, 99)
        a2, b2 = kernels.smo_solve_python(K, y, 10.0, 1e-3, 200, 99)
        assert np.array_equal(a1, a2)
        assert b1 == b2

    def test_box_constraint(self, random_problem):
        X, y = random_problem
        K = kernels.rbf_gram_numpy(X, 0.5)
        alpha, _ = kernels.smo_solve(K, y, 10.0, 1e-3, 200, 7)
        assert np.all(alpha >= 0.0) and np.all(alpha <= 10.0)

    def test_equality_constraint(self, random_problem):
        # sum(alpha_i * y_i) stays 0: every update moves the pair together
        X, y = random_problem
        K = kernels.rbf_gram_numpy(X, 0.5)
        alpha, _ = kernels.smo_solve(K, y, 10.0, 1e-3, 200, 7)
        assert float(np.dot(alpha, y)) == pytest.approx(0.0, abs=1e-9)

    def test_deterministic_per_seed(self, random_problem):
        X, y = random_problem
        K = kernels.rbf_gram_numpy(X, 0.5)
        a1, b1 = kernels.smo_solve(K, y, 10.0, 1e-3, 200, 3)
        a2, b2 = kernels.smo_solve(K, y, 10.0, 1e-3, 200, 3)
        assert np.array_equal(a1, a2) and b1 == b2


class TestEnvFlag:
    def test_disable_flag_selects_numpy_path(self):
        code = (
            "from augbench import kernels; "
            "assert not kernels.NUMBA_ENABLED; "
            "assert kernels.rbf_gram is kernels.rbf_gram_numpy; "
            "assert kernels.smo_solve is kernels.smo_solve_python; "
            "print('ok')"
        )
        env = dict(os.environ, AUGBENCH_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env,
            capture_output=True, text=True,
        )
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == "ok"

    def test_fallback_trains_same_predictions(self, random_problem):
        # end to end through the solver: alphas from both paths give the
        # same decision signs
        X, y = random_problem
        K = kernels.rbf_gram_numpy(X, 0.5)
        a_sel, b_sel = kernels.smo_solve(K, y, 10.0, 1e-3, 200, 21)
        a_py, b_py = kernels.smo_solve_python(K, y, 10.0, 1e-3, 200, 21)
        f_sel = K @ (a_sel * y) + b_sel
        f_py = K @ (a_py * y) + b_py
        assert np.array_equal(np.sign(f_sel), np.sign(f_py))
