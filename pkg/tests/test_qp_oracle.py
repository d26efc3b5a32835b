import numpy as np
import pytest

from marketguard import LinearKernel, RBFKernel, SizeLimitError
from marketguard.qp import _project_box_hyperplane, decision_values, solve_dual_qp

TWO_POINT_X = np.array([[-1.0, 0.0], [1.0, 0.0]])
TWO_POINT_Y = np.array([-1, 1])


def test_two_point_analytic_solution():
    # By symmetry both multipliers equal a; maximizing 2a - 2a^2 gives
    # a = 1/2 and objective 1/2, w = (1, 0), bias 0.
    sol = solve_dual_qp(TWO_POINT_X, TWO_POINT_Y, LinearKernel(), 1e6)
    np.testing.assert_allclose(sol.alphas, [0.5, 0.5], atol=1e-8)
    assert sol.objective == pytest.approx(0.5, abs=1e-8)
    assert sol.bias == pytest.approx(0.0, abs=1e-8)


def test_tiny_penalty_collapses_multipliers():
    sol = solve_dual_qp(TWO_POINT_X, TWO_POINT_Y, LinearKernel(), 1e-9)
    assert np.all(sol.alphas <= 1e-9)


def test_xor_agrees_with_smo():
    from marketguard import SMOClassifier

    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = np.array([1, 1, -1, -1])
    kernel = RBFKernel(gamma=1.0)
    sol = solve_dual_qp(X, y, kernel, 10.0)
    clf = SMOClassifier(kernel=kernel, C=10.0).fit(X, y)
    np.testing.assert_allclose(
        decision_values(sol, X, y, kernel, X), clf.decision_function(X), atol=1e-2
    )


def test_size_limit():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, size=(13, 2))
    y = np.array([-1, 1] * 6 + [1])
    with pytest.raises(SizeLimitError):
        solve_dual_qp(X, y, LinearKernel(), 1.0)


def test_self_consistency_under_more_iterations():
    rng = np.random.default_rng(11)
    for trial in range(10):
        m = int(rng.integers(3, 9))
        d = int(rng.integers(1, 4))
        X = rng.uniform(-1, 1, size=(m, d))
        y = rng.choice([-1, 1], size=m)
        if np.all(y == y[0]):
            y[0] = -y[0]
        c = [1.0, 10.0, 1e4][trial % 3]
        short = solve_dual_qp(X, y, RBFKernel(gamma=1.0), c, max_iter=20_000)
        long = solve_dual_qp(X, y, RBFKernel(gamma=1.0), c, max_iter=200_000)
        assert abs(short.objective - long.objective) <= 1e-6


def test_feasibility_invariants():
    rng = np.random.default_rng(23)
    for trial in range(20):
        m = int(rng.integers(2, 9))
        d = int(rng.integers(1, 4))
        X = rng.uniform(-1, 1, size=(m, d))
        y = rng.choice([-1, 1], size=m)
        if np.all(y == y[0]):
            y[0] = -y[0]
        c = [1.0, 10.0, 1e4][trial % 3]
        sol = solve_dual_qp(X, y, LinearKernel(), c)
        assert np.all(sol.alphas >= 0.0) and np.all(sol.alphas <= c)
        assert abs(float(sol.alphas @ y)) <= 1e-8 * max(1.0, c)


def test_projection_properties():
    rng = np.random.default_rng(5)
    for trial in range(200):
        m = int(rng.integers(2, 9))
        y = rng.choice([-1.0, 1.0], size=m)
        if np.all(y == y[0]):
            y[0] = -y[0]
        c = [1.0, 10.0, 1e4][trial % 3]
        v = rng.uniform(-2 * c, 2 * c, size=m)
        p = _project_box_hyperplane(v, y, c)
        assert np.all(p >= 0.0) and np.all(p <= c)
        assert abs(float(y @ p)) <= 1e-9 * max(1.0, c)
        # projection optimality against other feasible points
        w = _project_box_hyperplane(rng.uniform(-c, c, size=m), y, c)
        assert float((v - p) @ (w - p)) <= 1e-6 * max(1.0, c * c)
