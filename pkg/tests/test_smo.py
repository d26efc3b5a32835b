import numpy as np
import pytest

from marketguard import (
    ConvergenceError,
    DegenerateLabelsError,
    InvalidInputError,
    LinearKernel,
    PolynomialKernel,
    RBFKernel,
    SMOClassifier,
    kkt_violation,
)
from marketguard.qp import decision_values, solve_dual_qp

TWO_POINT_X = np.array([[-1.0, 0.0], [1.0, 0.0]])
TWO_POINT_Y = np.array([-1, 1])


@pytest.fixture(scope="module")
def two_point_model():
    return SMOClassifier(kernel="linear", C=1e6).fit(TWO_POINT_X, TWO_POINT_Y).model_


class TestTwoPointAnalytic:
    """The symmetric pair has the closed-form solution w=(1,0), b=0."""

    def test_weights_and_bias(self, two_point_model):
        np.testing.assert_allclose(two_point_model.primal_weights(), [1.0, 0.0], atol=1e-4)
        assert abs(two_point_model.intercept) <= 1e-4

    def test_decision_values(self, two_point_model):
        assert two_point_model.decision_function(np.array([2.0, 0.0])) == pytest.approx(2.0, abs=1e-4)
        assert two_point_model.decision_function(np.array([0.0, 0.0])) == pytest.approx(0.0, abs=1e-4)
        assert two_point_model.decision_function(np.array([-1.0, 0.0])) == pytest.approx(-1.0, abs=1e-4)

    def test_margin(self, two_point_model):
        assert two_point_model.margin() == pytest.approx(1.0, abs=1e-4)

    def test_training_points_on_boundaries(self, two_point_model):
        values = two_point_model.decision_function(TWO_POINT_X)
        np.testing.assert_allclose(values, [-1.0, 1.0], atol=1e-4)


def test_degenerate_labels_rejected():
    X = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    with pytest.raises(DegenerateLabelsError, match="degenerate labels"):
        SMOClassifier().fit(X, np.array([1, 1, 1]))


def test_label_encoding_enforced():
    X = np.array([[0.0], [1.0]])
    with pytest.raises(InvalidInputError):
        SMOClassifier().fit(X, np.array([0, 1]))


def test_xor_with_rbf_kernel():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = np.array([1, 1, -1, -1])
    clf = SMOClassifier(kernel=RBFKernel(gamma=1.0), C=10.0).fit(X, y)
    np.testing.assert_array_equal(clf.predict(X), y)
    # symmetry of the four corners forces equal multipliers and zero bias
    assert np.ptp(clf.model_.dual_coef) <= 1e-3
    assert abs(clf.intercept_) <= 1e-3


def test_classify_tie_goes_positive(two_point_model):
    assert two_point_model.predict(np.array([0.0, 0.0])) == 1
    assert two_point_model.predict(np.array([5.0, 0.0])) == 1
    assert two_point_model.predict(np.array([-5.0, 0.0])) == -1


def test_probe_dimension_mismatch(two_point_model):
    with pytest.raises(InvalidInputError):
        two_point_model.decision_function(np.array([1.0, 2.0, 3.0]))


def test_kkt_violation_of_fresh_model(two_point_model):
    assert kkt_violation(two_point_model, TWO_POINT_X, TWO_POINT_Y) <= 1e-3


def test_kkt_violation_detects_perturbed_bias(two_point_model):
    from dataclasses import replace

    skewed = replace(two_point_model, intercept=two_point_model.intercept + 1.0)
    assert kkt_violation(skewed, TWO_POINT_X, TWO_POINT_Y) >= 1.0 - 1e-3


def test_kkt_violation_empty_set(two_point_model):
    assert kkt_violation(two_point_model, np.zeros((0, 2)), np.zeros(0)) == 0.0


def test_mirrored_data_negates_weights():
    rng = np.random.default_rng(9)
    X = rng.uniform(-1, 1, size=(12, 2))
    y = np.where(X[:, 0] + 0.3 * X[:, 1] > 0.1, 1, -1)
    if np.all(y == y[0]):
        y[0] = -y[0]
    w = SMOClassifier(kernel="linear", C=10.0).fit(X, y).model_.primal_weights()
    w_mirror = SMOClassifier(kernel="linear", C=10.0).fit(-X, -y).model_.primal_weights()
    np.testing.assert_allclose(w_mirror, -w, atol=1e-6)


def test_deterministic_given_seed():
    rng = np.random.default_rng(4)
    X = rng.uniform(-1, 1, size=(20, 3))
    y = rng.choice([-1, 1], size=20)
    y[0], y[1] = 1, -1
    a = SMOClassifier(kernel="rbf", C=5.0, random_state=123).fit(X, y).model_
    b = SMOClassifier(kernel="rbf", C=5.0, random_state=123).fit(X, y).model_
    assert np.array_equal(a.support_vectors, b.support_vectors)
    assert np.array_equal(a.dual_coef, b.dual_coef)
    assert a.intercept == b.intercept


def test_row_order_invariance():
    rng = np.random.default_rng(14)
    X = rng.uniform(-1, 1, size=(15, 2))
    y = rng.choice([-1, 1], size=15)
    y[0], y[1] = 1, -1
    probes = rng.uniform(-1.5, 1.5, size=(10, 2))
    base = SMOClassifier(C=3.0).fit(X, y).decision_function(probes)
    perm = rng.permutation(15)
    shuffled = SMOClassifier(C=3.0).fit(X[perm], y[perm]).decision_function(probes)
    np.testing.assert_allclose(shuffled, base, atol=1e-6)


def test_dual_feasibility_of_trained_models():
    rng = np.random.default_rng(21)
    for trial in range(20):
        m = int(rng.integers(4, 16))
        X = rng.uniform(-1, 1, size=(m, 2))
        y = rng.choice([-1, 1], size=m)
        y[0], y[1] = 1, -1
        c = [0.5, 5.0, 1e3][trial % 3]
        model = SMOClassifier(kernel="rbf", C=c).fit(X, y).model_
        assert np.all(model.dual_coef > 0.0)
        assert np.all(model.dual_coef <= c + 1e-8)
        assert abs(float(model.dual_coef @ model.support_labels)) <= 1e-3
        assert set(np.unique(model.support_labels)) == {-1.0, 1.0}


def test_separable_data_boundary_geometry():
    # With a large penalty every support sample must sit on a class boundary.
    rng = np.random.default_rng(31)
    for trial in range(10):
        m = int(rng.integers(4, 12))
        X = rng.uniform(-1, 1, size=(m, 2))
        w_true = np.array([1.0, -0.5])
        y = np.where(X @ w_true > 0.2, 1, -1)
        X = X + y[:, np.newaxis] * 0.3 * w_true / np.linalg.norm(w_true)  # widen the gap
        if np.all(y == y[0]):
            continue
        clf = SMOClassifier(kernel="linear", C=1e4).fit(X, y)
        margins = y * clf.decision_function(X)
        assert np.min(margins) >= 1.0 - 10 * 1e-3
        sv_values = np.abs(clf.decision_function(clf.support_vectors_))
        assert 1.0 - 10 * 1e-3 <= np.min(sv_values) <= np.max(np.minimum(sv_values, 1.0 + 10 * 1e-3)) + 1e-12


def test_oracle_equivalence_randomized():
    kernels = [LinearKernel(), PolynomialKernel(degree=2, offset=1.0), RBFKernel(gamma=1.0)]
    for i in range(15):
        rng = np.random.default_rng(3000 + i)
        d = int(rng.integers(1, 4))
        m = int(rng.integers(2, 9))
        X = rng.uniform(-1, 1, size=(m, d))
        y = rng.choice([-1, 1], size=m)
        if np.all(y == y[0]):
            y[rng.integers(m)] = -y[0]
        kernel = kernels[i % 3]
        c = [1.0, 10.0, 1e4][i % 3]
        clf = SMOClassifier(kernel=kernel, C=c).fit(X, y)
        sol = solve_dual_qp(X, y, kernel, c)
        probes = rng.uniform(-1.5, 1.5, size=(20, d))
        np.testing.assert_allclose(
            clf.decision_function(probes),
            decision_values(sol, X, y, kernel, probes),
            atol=1e-2,
        )


def test_convergence_error_carries_diagnostics():
    # one pass is never enough for this non-trivial problem
    rng = np.random.default_rng(2)
    X = rng.uniform(-1, 1, size=(30, 2))
    y = rng.choice([-1, 1], size=30)
    y[0], y[1] = 1, -1
    with pytest.raises(ConvergenceError) as excinfo:
        SMOClassifier(kernel="rbf", C=100.0, max_passes=1).fit(X, y)
    assert excinfo.value.passes == 1
    assert excinfo.value.kkt_violation > 1e-3


def test_estimator_get_params_round_trip():
    clf = SMOClassifier(kernel="poly", C=2.0, degree=3, coef0=0.5, random_state=7)
    params = clf.get_params()
    clone = SMOClassifier(**params)
    assert clone.get_params() == params
