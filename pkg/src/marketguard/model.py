"""Trained SVM model: decision geometry, KKT diagnostics, and serialization.

The on-disk format is a single JSON document tagged ``marketguard-svm/1``.
Floats are written with full round-trip precision, so a saved model reproduces
decision values bit-exactly after loading.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import (
    DegenerateModelError,
    InvalidInputError,
    UnsupportedOperationError,
)
from .kernels import Kernel, LinearKernel, kernel_from_dict

MODEL_FORMAT = "marketguard-svm/1"


@dataclass(frozen=True)
class TrainConfig:
    """Soft-margin training knobs; defaults are the documented conventions."""

    c: float = 1.0
    kkt_tol: float = 1e-3
    value_eps: float = 1e-8
    max_passes: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidInputError(f"penalty must be > 0, got {self.c}")
        if not self.kkt_tol > 0:
            raise InvalidInputError(f"kkt_tol must be > 0, got {self.kkt_tol}")
        if not self.value_eps > 0:
            raise InvalidInputError(f"value_eps must be > 0, got {self.value_eps}")
        if int(self.max_passes) != self.max_passes or self.max_passes <= 0:
            raise InvalidInputError(f"max_passes must be a positive integer, got {self.max_passes}")
        if int(self.rng_seed) != self.rng_seed or self.rng_seed < 0:
            raise InvalidInputError(f"rng_seed must be a non-negative integer, got {self.rng_seed}")


@dataclass
class SvmModel:
    """Support vectors, their labels and multipliers, the kernel, and the bias."""

    kernel: Kernel
    support_vectors: np.ndarray
    support_labels: np.ndarray
    dual_coef: np.ndarray
    intercept: float
    config: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        self.support_vectors = np.asarray(self.support_vectors, dtype=np.float64)
        if self.support_vectors.ndim == 1 and self.support_vectors.size:
            self.support_vectors = self.support_vectors[np.newaxis, :]
        if self.support_vectors.ndim != 2:
            raise InvalidInputError("support vectors must form a 2-d matrix (possibly with zero rows)")
        self.support_labels = np.asarray(self.support_labels, dtype=np.float64).reshape(-1)
        self.dual_coef = np.asarray(self.dual_coef, dtype=np.float64).reshape(-1)
        n = self.support_vectors.shape[0]
        if self.support_labels.shape != (n,) or self.dual_coef.shape != (n,):
            raise InvalidInputError("support vectors, labels, and multipliers must be aligned")
        if n and not np.all(np.isin(self.support_labels, (-1.0, 1.0))):
            raise InvalidInputError("support labels must be -1 or +1")
        if n and (np.any(self.dual_coef <= 0) or np.any(self.dual_coef > self.config.c + self.config.value_eps)):
            raise InvalidInputError("multipliers must lie in (0, c]")

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    def _check_probes(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[np.newaxis, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise InvalidInputError(
                f"probe shape {X.shape} does not match model dimension {self.n_features}"
            )
        if not np.all(np.isfinite(X)):
            raise InvalidInputError("probes must be finite")
        return X

    def decision_function(self, X):
        """Signed distance surrogate: kernel expansion over support vectors plus bias.

        A single vector yields a float; a 2-d matrix yields one value per row.
        """
        X_arr = np.asarray(X, dtype=np.float64)
        single = X_arr.ndim == 1
        X_arr = self._check_probes(X_arr)
        if self.support_vectors.shape[0] == 0:
            values = np.full(X_arr.shape[0], self.intercept)
        else:
            weights = self.dual_coef * self.support_labels
            values = self.kernel.matrix(X_arr, self.support_vectors) @ weights + self.intercept
        return float(values[0]) if single else values

    def predict(self, X):
        """Class labels in {-1, +1}; a decision value of exactly 0 maps to +1."""
        values = self.decision_function(X)
        if np.isscalar(values):
            return 1 if values >= 0.0 else -1
        return np.where(values >= 0.0, 1, -1)

    def squared_weight_norm(self) -> float:
        """||w||^2 computed from the kernel expansion."""
        if self.support_vectors.shape[0] == 0:
            return 0.0
        weights = self.dual_coef * self.support_labels
        return float(weights @ self.kernel.matrix(self.support_vectors) @ weights)

    def margin(self) -> float:
        """Distance from the separating surface to either class boundary, 1/||w||."""
        norm_sq = self.squared_weight_norm()
        if norm_sq <= self.config.value_eps:
            raise DegenerateModelError(f"weight norm is degenerate: ||w||^2 = {norm_sq}")
        return 1.0 / float(np.sqrt(norm_sq))

    def primal_weights(self) -> np.ndarray:
        """Explicit weight vector; only defined for the linear kernel."""
        if not isinstance(self.kernel, LinearKernel):
            raise UnsupportedOperationError(
                f"primal weights are only defined for the linear kernel, not {type(self.kernel).__name__}"
            )
        return (self.dual_coef * self.support_labels) @ self.support_vectors

    def dual_objective(self) -> float:
        """Value of the dual objective at the stored multipliers."""
        if self.support_vectors.shape[0] == 0:
            return 0.0
        weights = self.dual_coef * self.support_labels
        return float(self.dual_coef.sum() - 0.5 * weights @ self.kernel.matrix(self.support_vectors) @ weights)


def kkt_violation(model: SvmModel, X, y, config: TrainConfig | None = None) -> float:
    """Maximum complementarity violation of the soft-margin optimality conditions.

    Points absent from the support set are treated as zero-multiplier points.
    An empty evaluation set yields 0.
    """
    cfg = config or model.config
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if X.size == 0:
        return 0.0
    if X.ndim == 1:
        X = X[np.newaxis, :]
    if X.shape[0] != y.shape[0]:
        raise InvalidInputError(f"inconsistent shapes: X {X.shape}, y {y.shape}")

    # Recover each evaluation point's multiplier by exact match against the
    # stored support set; duplicates consume matches in order.
    pool: dict[tuple[bytes, float], list[float]] = {}
    for vec, label, alpha in zip(model.support_vectors, model.support_labels, model.dual_coef):
        pool.setdefault((vec.tobytes(), float(label)), []).append(float(alpha))

    values = model.decision_function(X)
    if np.isscalar(values):
        values = np.array([values])
    worst = 0.0
    eps = cfg.value_eps
    for xi, yi, fi in zip(X, y, values):
        matches = pool.get((np.ascontiguousarray(xi).tobytes(), float(yi)))
        alpha = matches.pop(0) if matches else 0.0
        margin_value = yi * fi
        if alpha <= eps:
            violation = max(0.0, 1.0 - margin_value)
        elif alpha >= cfg.c - eps:
            violation = max(0.0, margin_value - 1.0)
        else:
            violation = abs(margin_value - 1.0)
        worst = max(worst, violation)
    return worst


@dataclass
class ModelBundle:
    """A model file's contents: the SVM plus optional pipeline extras."""

    model: SvmModel
    feature_manifest: dict | None = None
    scaling: dict | None = None


def save_model(path, model: SvmModel, *, feature_manifest: dict | None = None, scaling: dict | None = None) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "kernel": model.kernel.to_dict(),
        "dimension": int(model.n_features),
        "support_vectors": [[float(v) for v in row] for row in model.support_vectors],
        "support_labels": [int(v) for v in model.support_labels],
        "dual_coef": [float(v) for v in model.dual_coef],
        "intercept": float(model.intercept),
        "train_config": asdict(model.config),
    }
    if feature_manifest is not None:
        doc["feature_manifest"] = feature_manifest
    if scaling is not None:
        doc["scaling"] = scaling
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_model(path) -> ModelBundle:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise InvalidInputError(
            f"unsupported model format {doc.get('format')!r}; expected {MODEL_FORMAT!r}"
        )
    dimension = int(doc["dimension"])
    vectors = np.array(doc["support_vectors"], dtype=np.float64).reshape(-1, dimension)
    model = SvmModel(
        kernel=kernel_from_dict(doc["kernel"]),
        support_vectors=vectors,
        support_labels=np.array(doc["support_labels"], dtype=np.float64),
        dual_coef=np.array(doc["dual_coef"], dtype=np.float64),
        intercept=float(doc["intercept"]),
        config=TrainConfig(**doc["train_config"]),
    )
    return ModelBundle(
        model=model,
        feature_manifest=doc.get("feature_manifest"),
        scaling=doc.get("scaling"),
    )
