import numpy as np
import pytest

from marketguard import InvalidInputError, LinearKernel, PolynomialKernel, RBFKernel
from marketguard.kernels import kernel_from_dict, resolve_kernel


def test_linear_dot_product():
    assert LinearKernel()((1.0, 2.0), (3.0, 4.0)) == 11.0


def test_rbf_same_point_is_one():
    assert RBFKernel(gamma=1.0)((0.3, 0.7), (0.3, 0.7)) == 1.0


def test_polynomial_orthogonal_with_offset():
    assert PolynomialKernel(degree=2, offset=1.0)((1.0, 0.0), (0.0, 1.0)) == 1.0


def test_dimension_mismatch_rejected():
    with pytest.raises(InvalidInputError):
        LinearKernel()((1.0, 2.0), (1.0, 2.0, 3.0))


def test_non_finite_rejected():
    with pytest.raises(InvalidInputError):
        RBFKernel(gamma=1.0)((np.nan, 0.0), (0.0, 0.0))


def test_parameter_validation():
    with pytest.raises(InvalidInputError):
        RBFKernel(gamma=0.0)
    with pytest.raises(InvalidInputError):
        PolynomialKernel(degree=0)
    with pytest.raises(InvalidInputError):
        PolynomialKernel(degree=2, offset=-0.5)


@pytest.mark.parametrize("kernel", [
    LinearKernel(),
    PolynomialKernel(degree=3, offset=0.5),
    RBFKernel(gamma=2.0),
])
def test_symmetry_exact(kernel):
    rng = np.random.default_rng(42)
    for _ in range(100):
        a = rng.uniform(-2, 2, size=4)
        b = rng.uniform(-2, 2, size=4)
        assert kernel(a, b) == kernel(b, a)


def test_rbf_values_in_unit_interval():
    rng = np.random.default_rng(7)
    kernel = RBFKernel(gamma=0.5)
    X = rng.uniform(-3, 3, size=(30, 3))
    K = kernel.matrix(X)
    assert np.all(K > 0.0) and np.all(K <= 1.0)


def test_gram_matrix_matches_pairwise():
    rng = np.random.default_rng(3)
    X = rng.uniform(-1, 1, size=(5, 2))
    Y = rng.uniform(-1, 1, size=(4, 2))
    for kernel in (LinearKernel(), PolynomialKernel(), RBFKernel(gamma=0.7)):
        K = kernel.matrix(X, Y)
        for i in range(5):
            for j in range(4):
                assert K[i, j] == pytest.approx(kernel(X[i], Y[j]), abs=1e-12)


def test_serialization_round_trip():
    for kernel in (LinearKernel(), PolynomialKernel(degree=4, offset=2.0), RBFKernel(gamma=0.25)):
        assert kernel_from_dict(kernel.to_dict()) == kernel


def test_resolve_kernel_auto_gamma():
    kernel = resolve_kernel("rbf", 8)
    assert kernel == RBFKernel(gamma=1.0 / 8)
    assert resolve_kernel("linear", 3) == LinearKernel()
    assert resolve_kernel("poly", 3, degree=3, coef0=0.5) == PolynomialKernel(degree=3, offset=0.5)
    with pytest.raises(InvalidInputError):
        resolve_kernel("sigmoid", 3)
