"""Fraud detection: reputation matching, expert inputs, signal fusion.

The final verdict for a seller comes from four independent signals, fused in
strict precedence order:

1. an expert verdict on record decides outright (confidence 1.0);
2. a reputation match against a banned profile decides Fraudulent (0.95);
3. a seller with no order history gets InsufficientHistory (0.0) so the
   classifier never judges sellers it has no evidence about;
4. otherwise a weighted blend of the normalized rules score and the squashed
   classifier score is compared to the fusion threshold.

The precedence, weights, and confidence constants are policy defaults, kept
in one place (:class:`FusionPolicy` and :func:`fuse`) so they can be tuned
without touching the signal producers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .dataset_io import dump_lines, iter_objects
from .exceptions import (
    ConfigurationError,
    DatasetFormatError,
    InvalidInputError,
    ManifestMismatchError,
    NotFoundError,
)
from .features import FeatureScaler, FeatureVector, MANIFEST_VERSION, FEATURE_NAMES, extract, scale_vector
from .model import ModelBundle, SvmModel
from .records import LabeledSeller, SellerHistory, SellerProfile
from .rules import RuleOutcome, RuleSet, evaluate_rules


class Verdict(str, Enum):
    FRAUDULENT = "Fraudulent"
    NORMAL = "Normal"
    INSUFFICIENT_HISTORY = "InsufficientHistory"


@dataclass(frozen=True)
class ReputationRecord:
    attributes: SellerProfile
    status: str  # "banned" | "clean"
    source: str  # "internal" | "external"
    recorded_at: int


@dataclass(frozen=True)
class ExpertInput:
    seller_id: str
    verdict: str  # "fraudulent" | "normal"
    note: str
    expert_id: str
    recorded_at: int


@dataclass
class SignalBundle:
    rule_outcome: RuleOutcome
    has_history: bool
    svm_score: float | None = None
    reputation_hit: ReputationRecord | None = None
    expert_verdict: ExpertInput | None = None

    def __post_init__(self):
        if self.svm_score is not None and not self.has_history:
            raise InvalidInputError("svm_score is only meaningful when the seller has history")


@dataclass
class FraudVerdict:
    seller_id: str
    verdict: Verdict
    confidence: float
    contributing: list[tuple[str, float]] = field(default_factory=list)


@dataclass(frozen=True)
class FusionPolicy:
    w_rules: float = 0.4
    w_svm: float = 0.6
    fusion_threshold: float = 0.5

    def __post_init__(self):
        if self.w_rules < 0 or self.w_svm < 0:
            raise ConfigurationError(
                f"fusion weights must be non-negative, got {self.w_rules}, {self.w_svm}"
            )
        if abs(self.w_rules + self.w_svm - 1.0) > 1e-9:
            raise ConfigurationError(
                f"fusion weights must sum to 1, got {self.w_rules} + {self.w_svm}"
            )


def sigmoid(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    z = math.exp(t)
    return z / (1.0 + z)


_WHITESPACE = re.compile(r"\s+")
_PUNCT = re.compile(r"[^\w\s]")


def _normalize_name(name: str) -> str:
    return _WHITESPACE.sub(" ", _PUNCT.sub("", name.casefold())).strip()


def reputation_match(db: list[ReputationRecord], profile: SellerProfile) -> ReputationRecord | None:
    """First banned record matching the profile, if any.

    A match needs either one strong identifier (tax id or bank account hash,
    exact) or at least two weak ones (address, email domain, normalized
    display name). Unset strong identifiers never match.
    """
    for record in db:
        if record.status != "banned":
            continue
        known = record.attributes
        if profile.tax_id is not None and profile.tax_id == known.tax_id:
            return record
        if profile.bank_account_hash is not None and profile.bank_account_hash == known.bank_account_hash:
            return record
        weak = 0
        if profile.address == known.address:
            weak += 1
        if profile.email_domain == known.email_domain:
            weak += 1
        if _normalize_name(profile.display_name) == _normalize_name(known.display_name):
            weak += 1
        if weak >= 2:
            return record
    return None


@dataclass
class ExpertInputStore:
    """Expert verdicts on file; ingestion also feeds the retraining pool."""

    inputs: list[ExpertInput] = field(default_factory=list)

    def ingest(self, entry: ExpertInput, histories: dict[str, SellerHistory],
               training_pool: list[LabeledSeller]) -> bool:
        """Record an expert verdict; returns False for an exact repeat (no-op)."""
        if entry.seller_id not in histories:
            raise NotFoundError(f"unknown seller {entry.seller_id!r}")
        for existing in self.inputs:
            if (existing.expert_id, existing.seller_id, existing.verdict) == (
                entry.expert_id, entry.seller_id, entry.verdict,
            ):
                return False
        self.inputs.append(entry)
        label = 1 if entry.verdict == "fraudulent" else -1
        training_pool.append(LabeledSeller(history=histories[entry.seller_id], label=label))
        return True

    def latest_for(self, seller_id: str) -> ExpertInput | None:
        candidates = [e for e in self.inputs if e.seller_id == seller_id]
        if not candidates:
            return None
        return max(candidates, key=lambda e: e.recorded_at)


def _normalized_rule_score(outcome: RuleOutcome, decision_threshold: float) -> float:
    if decision_threshold <= 0:
        return 1.0  # a zero threshold means any score already meets it
    return min(outcome.aggregate_score / decision_threshold, 1.0)


def fuse(bundle: SignalBundle, policy: FusionPolicy, seller_id: str,
         rules_decision_threshold: float) -> FraudVerdict:
    """Consolidate the signal bundle into a verdict; precedence documented above."""
    if bundle.expert_verdict is not None:
        fraudulent = bundle.expert_verdict.verdict == "fraudulent"
        return FraudVerdict(
            seller_id=seller_id,
            verdict=Verdict.FRAUDULENT if fraudulent else Verdict.NORMAL,
            confidence=1.0,
            contributing=[("expert", 1.0 if fraudulent else -1.0)],
        )
    if bundle.reputation_hit is not None:
        return FraudVerdict(
            seller_id=seller_id,
            verdict=Verdict.FRAUDULENT,
            confidence=0.95,
            contributing=[("reputation_hit", 1.0)],
        )
    if not bundle.has_history:
        return FraudVerdict(
            seller_id=seller_id,
            verdict=Verdict.INSUFFICIENT_HISTORY,
            confidence=0.0,
            contributing=[("has_history", 0.0)],
        )
    normalized = _normalized_rule_score(bundle.rule_outcome, rules_decision_threshold)
    squashed = sigmoid(bundle.svm_score)
    combined = policy.w_rules * normalized + policy.w_svm * squashed
    fraudulent = combined >= policy.fusion_threshold
    return FraudVerdict(
        seller_id=seller_id,
        verdict=Verdict.FRAUDULENT if fraudulent else Verdict.NORMAL,
        confidence=combined if fraudulent else 1.0 - combined,
        contributing=[
            ("rules_score", bundle.rule_outcome.aggregate_score),
            ("rules_normalized", normalized),
            ("svm_score", float(bundle.svm_score)),
            ("svm_sigmoid", squashed),
        ],
    )


class FraudDetector:
    """Read-only detection pipeline over immutable model/ruleset/store snapshots."""

    def __init__(self, model: SvmModel, scaler: FeatureScaler, ruleset: RuleSet,
                 *, feature_manifest: dict | None = None,
                 reputation: list[ReputationRecord] | None = None,
                 expert_inputs: ExpertInputStore | None = None,
                 policy: FusionPolicy | None = None):
        check_manifest(feature_manifest)
        self.model = model
        self.scaler = scaler
        self.ruleset = ruleset
        self.reputation = reputation or []
        self.expert_inputs = expert_inputs or ExpertInputStore()
        self.policy = policy or FusionPolicy()

    @classmethod
    def from_bundle(cls, bundle: ModelBundle, ruleset: RuleSet, **kwargs) -> "FraudDetector":
        if bundle.scaling is None:
            raise ConfigurationError("model file carries no scaling parameters")
        check_manifest(bundle.feature_manifest)
        return cls(
            model=bundle.model,
            scaler=FeatureScaler.from_dict(bundle.scaling),
            ruleset=ruleset,
            **kwargs,
        )

    def signals_for(self, history: SellerHistory) -> SignalBundle:
        features = extract(history)
        outcome = evaluate_rules(self.ruleset, features)
        svm_score = None
        if features.has_history:
            svm_score = float(self.model.decision_function(scale_vector(self.scaler, features)))
        return SignalBundle(
            rule_outcome=outcome,
            has_history=features.has_history,
            svm_score=svm_score,
            reputation_hit=reputation_match(self.reputation, history.profile),
            expert_verdict=self.expert_inputs.latest_for(history.profile.seller_id),
        )

    def detect(self, history: SellerHistory) -> FraudVerdict:
        bundle = self.signals_for(history)
        return fuse(bundle, self.policy, history.profile.seller_id, self.ruleset.decision_threshold)

    def detect_all(self, histories: list[SellerHistory]) -> list[FraudVerdict]:
        return [self.detect(history) for history in histories]


def check_manifest(manifest: dict | None) -> None:
    """Reject manifests from a different feature layout; exit-code 4 territory."""
    if manifest is None:
        return
    if manifest.get("version") != MANIFEST_VERSION or list(manifest.get("names", [])) != list(FEATURE_NAMES):
        raise ManifestMismatchError(
            f"model manifest {manifest!r} does not match this build's "
            f"{MANIFEST_VERSION} / {list(FEATURE_NAMES)}"
        )


# --- file formats (dataset family) -----------------------------------------

def load_reputation(path) -> list[ReputationRecord]:
    records = []
    for line_no, obj in iter_objects(path):
        if obj["kind"] != "reputation":
            raise DatasetFormatError(f"line {line_no}: expected kind 'reputation', got {obj['kind']!r}")
        try:
            attrs = obj["attributes"]
            record = ReputationRecord(
                attributes=SellerProfile(
                    seller_id=str(attrs["seller_id"]),
                    display_name=str(attrs["display_name"]),
                    address=str(attrs["address"]),
                    email_domain=str(attrs["email_domain"]),
                    enrolled_at=int(attrs["enrolled_at"]),
                    tax_id=None if attrs.get("tax_id") is None else str(attrs["tax_id"]),
                    bank_account_hash=None if attrs.get("bank_account_hash") is None else str(attrs["bank_account_hash"]),
                ),
                status=str(obj["status"]),
                source=str(obj["source"]),
                recorded_at=int(obj["recorded_at"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"line {line_no}: bad reputation record ({exc})") from exc
        if record.status not in ("banned", "clean"):
            raise DatasetFormatError(f"line {line_no}: status must be banned or clean")
        if record.source not in ("internal", "external"):
            raise DatasetFormatError(f"line {line_no}: source must be internal or external")
        records.append(record)
    return records


def save_reputation(path, records: list[ReputationRecord]) -> None:
    objects = []
    for record in records:
        attrs = record.attributes
        objects.append({
            "kind": "reputation",
            "status": record.status,
            "source": record.source,
            "recorded_at": record.recorded_at,
            "attributes": {
                "seller_id": attrs.seller_id,
                "display_name": attrs.display_name,
                "tax_id": attrs.tax_id,
                "bank_account_hash": attrs.bank_account_hash,
                "address": attrs.address,
                "email_domain": attrs.email_domain,
                "enrolled_at": attrs.enrolled_at,
            },
        })
    dump_lines(path, objects)


def load_expert_inputs(path) -> ExpertInputStore:
    store = ExpertInputStore()
    for line_no, obj in iter_objects(path):
        if obj["kind"] != "expert":
            raise DatasetFormatError(f"line {line_no}: expected kind 'expert', got {obj['kind']!r}")
        try:
            entry = ExpertInput(
                seller_id=str(obj["seller_id"]),
                verdict=str(obj["verdict"]),
                note=str(obj.get("note", "")),
                expert_id=str(obj["expert_id"]),
                recorded_at=int(obj["recorded_at"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"line {line_no}: bad expert record ({exc})") from exc
        if entry.verdict not in ("fraudulent", "normal"):
            raise DatasetFormatError(f"line {line_no}: verdict must be fraudulent or normal")
        store.inputs.append(entry)
    return store


def save_expert_inputs(path, store: ExpertInputStore) -> None:
    dump_lines(path, [
        {
            "kind": "expert",
            "seller_id": e.seller_id,
            "verdict": e.verdict,
            "note": e.note,
            "expert_id": e.expert_id,
            "recorded_at": e.recorded_at,
        }
        for e in store.inputs
    ])


def write_verdicts(path, verdicts: list[FraudVerdict]) -> None:
    dump_lines(path, [verdict_object(v) for v in verdicts])


def verdict_object(v: FraudVerdict) -> dict:
    return {
        "kind": "verdict",
        "seller_id": v.seller_id,
        "verdict": v.verdict.value,
        "confidence": v.confidence,
        "contributing": [[name, value] for name, value in v.contributing],
    }


def read_verdicts(path) -> list[FraudVerdict]:
    verdicts = []
    for line_no, obj in iter_objects(path):
        if obj["kind"] != "verdict":
            raise DatasetFormatError(f"line {line_no}: expected kind 'verdict', got {obj['kind']!r}")
        try:
            verdicts.append(FraudVerdict(
                seller_id=str(obj["seller_id"]),
                verdict=Verdict(obj["verdict"]),
                confidence=float(obj["confidence"]),
                contributing=[(str(n), float(x)) for n, x in obj.get("contributing", [])],
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"line {line_no}: bad verdict record ({exc})") from exc
    return verdicts
