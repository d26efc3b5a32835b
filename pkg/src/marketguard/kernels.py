"""Kernel functions for the SVM: linear, polynomial, and RBF.

Each kernel evaluates single pairs via ``kernel(a, b)`` and Gram matrices via
``kernel.matrix(X, Y)``. All kernels are symmetric in their arguments; the RBF
kernel additionally maps into (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[np.newaxis, :]
    if X.ndim != 2:
        raise InvalidInputError(f"expected a vector or a 2-d sample matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("samples must be finite")
    return X


@dataclass(frozen=True)
class Kernel:
    """Base class; subclasses implement the vectorized Gram computation."""

    def __call__(self, a, b) -> float:
        a = _as_matrix(a)
        b = _as_matrix(b)
        if a.shape != (1, b.shape[1]) or b.shape[0] != 1:
            raise InvalidInputError(
                f"kernel arguments must be single vectors of equal dimension, "
                f"got shapes {a.shape} and {b.shape}"
            )
        return float(self._gram(a, b)[0, 0])

    def matrix(self, X, Y=None) -> np.ndarray:
        """Gram matrix with entries k(X[i], Y[j]); Y defaults to X."""
        X = _as_matrix(X)
        Y = X if Y is None else _as_matrix(Y)
        if X.shape[1] != Y.shape[1]:
            raise InvalidInputError(
                f"sample dimensions differ: {X.shape[1]} vs {Y.shape[1]}"
            )
        return self._gram(X, Y)

    def _gram(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class LinearKernel(Kernel):
    """Plain dot product."""

    def _gram(self, X, Y):
        return X @ Y.T

    def to_dict(self):
        return {"type": "linear"}


@dataclass(frozen=True)
class PolynomialKernel(Kernel):
    """(x . y + offset) ** degree with integer degree >= 1 and offset >= 0."""

    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 1:
            raise InvalidInputError(f"polynomial degree must be an integer >= 1, got {self.degree}")
        if self.offset < 0:
            raise InvalidInputError(f"polynomial offset must be >= 0, got {self.offset}")

    def _gram(self, X, Y):
        return (X @ Y.T + self.offset) ** self.degree

    def to_dict(self):
        return {"type": "poly", "degree": int(self.degree), "offset": float(self.offset)}


@dataclass(frozen=True)
class RBFKernel(Kernel):
    """exp(-gamma * ||x - y||^2) with gamma > 0."""

    gamma: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidInputError(f"rbf gamma must be > 0, got {self.gamma}")

    def _gram(self, X, Y):
        # ||x-y||^2 expanded; clip rounding negatives so values stay in (0, 1]
        sq = (
            np.sum(X * X, axis=1)[:, np.newaxis]
            + np.sum(Y * Y, axis=1)[np.newaxis, :]
            - 2.0 * (X @ Y.T)
        )
        np.clip(sq, 0.0, None, out=sq)
        return np.exp(-self.gamma * sq)

    def to_dict(self):
        return {"type": "rbf", "gamma": float(self.gamma)}


KERNEL_NAMES = ("linear", "poly", "rbf")


def kernel_from_dict(data: dict) -> Kernel:
    """Inverse of ``Kernel.to_dict``."""
    kind = data.get("type")
    if kind == "linear":
        return LinearKernel()
    if kind == "poly":
        return PolynomialKernel(degree=int(data["degree"]), offset=float(data["offset"]))
    if kind == "rbf":
        return RBFKernel(gamma=float(data["gamma"]))
    raise InvalidInputError(f"unknown kernel type: {kind!r}")


def resolve_kernel(kernel, n_features: int, *, gamma="auto", degree: int = 2, coef0: float = 1.0) -> Kernel:
    """Turn a kernel name or instance into a concrete Kernel.

    ``gamma="auto"`` resolves to 1/n_features for the RBF kernel.
    """
    if isinstance(kernel, Kernel):
        return kernel
    if kernel == "linear":
        return LinearKernel()
    if kernel == "poly":
        return PolynomialKernel(degree=degree, offset=coef0)
    if kernel == "rbf":
        g = 1.0 / n_features if gamma == "auto" else float(gamma)
        return RBFKernel(gamma=g)
    raise InvalidInputError(f"kernel must be one of {KERNEL_NAMES} or a Kernel instance, got {kernel!r}")
