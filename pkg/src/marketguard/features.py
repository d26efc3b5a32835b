"""Feature extraction from seller histories plus min-max scaling.

The feature manifest below fixes the name and index order of every numeric
feature the classifier consumes. It is versioned and embedded in model files;
scoring refuses to run against a model built under a different manifest.

Degenerate-denominator policy for sellers with zero orders in the window:
return_ratio 0, complaint_rate 0, sla_adherence 1, and ``has_history`` False,
which routes the seller away from the classifier entirely. A seller with no
listings gets listing_accuracy 1, and one with no social mentions gets a
neutral social_sentiment of 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import InvalidInputError
from .records import Complaint, Listing, Order, Return, SellerHistory, SocialSignal

FEATURE_NAMES = (
    "listing_accuracy",
    "transaction_volume",
    "sla_adherence",
    "return_ratio",
    "complaint_rate",
    "customer_satisfaction",
    "social_sentiment",
)

MANIFEST_VERSION = "marketguard-features/1"


def feature_manifest() -> dict:
    """The versioned feature-order manifest embedded in model files."""
    return {"version": MANIFEST_VERSION, "names": list(FEATURE_NAMES)}


@dataclass(frozen=True)
class FeatureVector:
    listing_accuracy: float
    transaction_volume: float
    sla_adherence: float
    return_ratio: float
    complaint_rate: float
    customer_satisfaction: float
    social_sentiment: float
    has_history: bool

    def as_array(self) -> np.ndarray:
        """Numeric features in manifest order (``has_history`` is routing state, not a feature)."""
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=np.float64)


def extract(history: SellerHistory) -> FeatureVector:
    """Pure transformation of one seller history into its feature vector."""
    listings = [r for r in history.records if isinstance(r, Listing)]
    orders = [r for r in history.records if isinstance(r, Order)]
    returns = [r for r in history.records if isinstance(r, Return)]
    complaints = [r for r in history.records if isinstance(r, Complaint)]
    socials = [r for r in history.records if isinstance(r, SocialSignal)]

    n_orders = len(orders)
    has_history = n_orders > 0

    if listings:
        listing_accuracy = sum(1 for r in listings if r.declared_attributes_ok) / len(listings)
    else:
        listing_accuracy = 1.0

    if has_history:
        shipped = [o for o in orders if o.actual_ship is not None]
        if shipped:
            sla_adherence = sum(1 for o in shipped if o.actual_ship <= o.promised_ship) / len(shipped)
        else:
            sla_adherence = 1.0
        return_ratio = min(len(returns) / n_orders, 1.0)
        complaint_rate = sum(c.severity for c in complaints) / n_orders
    else:
        sla_adherence = 1.0
        return_ratio = 0.0
        complaint_rate = 0.0

    customer_satisfaction = 1.0 - min(max(complaint_rate / 5.0, 0.0), 1.0)

    total_mentions = sum(s.mentions for s in socials)
    if total_mentions > 0:
        social_sentiment = sum(s.sentiment * s.mentions for s in socials) / total_mentions
    else:
        social_sentiment = 0.0

    return FeatureVector(
        listing_accuracy=listing_accuracy,
        transaction_volume=float(n_orders),
        sla_adherence=sla_adherence,
        return_ratio=return_ratio,
        complaint_rate=complaint_rate,
        customer_satisfaction=customer_satisfaction,
        social_sentiment=social_sentiment,
        has_history=has_history,
    )


def feature_matrix(vectors: list[FeatureVector]) -> np.ndarray:
    """Stack feature vectors into an (n, d) matrix in manifest order."""
    if not vectors:
        return np.zeros((0, len(FEATURE_NAMES)))
    return np.stack([v.as_array() for v in vectors])


class FeatureScaler(TransformerMixin, BaseEstimator):
    """Min-max scaling onto [0, 1] with clamping.

    Columns that were constant during fit map to 0.5; out-of-corpus values are
    clamped, so every output lies in the unit box regardless of input.
    """

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1:
            raise InvalidInputError("scaling needs a non-empty 2-d feature matrix")
        if not np.all(np.isfinite(X)):
            raise InvalidInputError("features must be finite")
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        self._require_fitted()
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X[np.newaxis, :]
        if X.shape[1] != self.n_features_in_:
            raise InvalidInputError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        span = self.data_max_ - self.data_min_
        with np.errstate(invalid="ignore", divide="ignore"):
            scaled = (X - self.data_min_) / span
        scaled = np.where(span > 0, scaled, 0.5)
        scaled = np.clip(scaled, 0.0, 1.0)
        return scaled[0] if single else scaled

    def to_dict(self) -> dict:
        self._require_fitted()
        return {
            "data_min": [float(v) for v in self.data_min_],
            "data_max": [float(v) for v in self.data_max_],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureScaler":
        scaler = cls()
        scaler.data_min_ = np.asarray(data["data_min"], dtype=np.float64)
        scaler.data_max_ = np.asarray(data["data_max"], dtype=np.float64)
        scaler.n_features_in_ = scaler.data_min_.shape[0]
        return scaler

    def _require_fitted(self):
        if not hasattr(self, "data_min_"):
            raise InvalidInputError("this scaler has not been fitted yet")


def fit_scaling(vectors: list[FeatureVector]) -> FeatureScaler:
    """Fit min-max parameters over a corpus of extracted feature vectors."""
    if not vectors:
        raise InvalidInputError("cannot fit scaling on an empty corpus")
    return FeatureScaler().fit(feature_matrix(vectors))


def scale_vector(scaler: FeatureScaler, vector: FeatureVector) -> np.ndarray:
    """Scaled sample in [0, 1]^d for one feature vector."""
    return scaler.transform(vector.as_array())
