"""Declarative weighted rules over extracted features.

A rule is a single comparison against one manifest feature; compound logic is
expressed as multiple rules. Rules are validated when a RuleSet is built (or
loaded from its ``marketguard-rules/1`` config file), never at evaluation
time. The aggregate score of the rules that fire is compared to the ruleset's
decision threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .exceptions import ConfigurationError
from .features import FEATURE_NAMES, FeatureVector

RULES_FORMAT = "marketguard-rules/1"

COMPARATORS = ("<", "<=", ">", ">=", "=")
_COMPARATOR_ALIASES = {"≤": "<=", "≥": ">="}
_EQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class Rule:
    id: str
    feature: str
    comparator: str
    threshold_value: float
    weight: float
    description: str = ""

    def fires(self, value: float) -> bool:
        if self.comparator == "<":
            return value < self.threshold_value
        if self.comparator == "<=":
            return value <= self.threshold_value
        if self.comparator == ">":
            return value > self.threshold_value
        if self.comparator == ">=":
            return value >= self.threshold_value
        return abs(value - self.threshold_value) <= _EQUALITY_TOL


@dataclass
class RuleSet:
    rules: list[Rule] = field(default_factory=list)
    decision_threshold: float = 1.0

    def __post_init__(self):
        problems = []
        if self.decision_threshold < 0:
            problems.append(f"decision_threshold must be >= 0, got {self.decision_threshold}")
        seen = set()
        for rule in self.rules:
            if rule.id in seen:
                problems.append(f"duplicate rule id {rule.id!r}")
            seen.add(rule.id)
            if rule.feature not in FEATURE_NAMES:
                problems.append(f"rule {rule.id!r} references unknown feature {rule.feature!r}")
            if rule.comparator not in COMPARATORS:
                problems.append(f"rule {rule.id!r} uses unsupported comparator {rule.comparator!r}")
            if rule.weight < 0:
                problems.append(f"rule {rule.id!r} has negative weight {rule.weight}")
        if problems:
            raise ConfigurationError("invalid ruleset:\n" + "\n".join(problems))


@dataclass(frozen=True)
class RuleOutcome:
    fired: list[str]
    aggregate_score: float
    flagged: bool


def evaluate_rules(ruleset: RuleSet, features: FeatureVector) -> RuleOutcome:
    """Apply every rule; the score is the exact sum of the fired rules' weights."""
    fired = []
    score = 0.0
    for rule in ruleset.rules:
        if rule.fires(getattr(features, rule.feature)):
            fired.append(rule.id)
            score += rule.weight
    return RuleOutcome(fired=fired, aggregate_score=score, flagged=score >= ruleset.decision_threshold)


def _rule_from_object(obj: dict, index: int, problems: list[str]) -> Rule | None:
    required = ("id", "feature", "comparator", "value", "weight")
    missing = [k for k in required if k not in obj]
    if missing:
        problems.append(f"rule #{index}: missing fields {missing}")
        return None
    comparator = _COMPARATOR_ALIASES.get(str(obj["comparator"]), str(obj["comparator"]))
    if comparator not in COMPARATORS:
        problems.append(f"rule {obj['id']!r}: unsupported comparator {obj['comparator']!r}")
        return None
    try:
        value = float(obj["value"])
        weight = float(obj["weight"])
    except (TypeError, ValueError):
        problems.append(f"rule {obj['id']!r}: value and weight must be numeric")
        return None
    return Rule(
        id=str(obj["id"]),
        feature=str(obj["feature"]),
        comparator=comparator,
        threshold_value=value,
        weight=weight,
        description=str(obj.get("description", "")),
    )


def parse_ruleset(doc: dict) -> RuleSet:
    """Validate a parsed ruleset document, collecting every violation."""
    problems: list[str] = []
    if doc.get("format") != RULES_FORMAT:
        raise ConfigurationError(
            f"unsupported ruleset format {doc.get('format')!r}; expected {RULES_FORMAT!r}"
        )
    if "decision_threshold" not in doc:
        problems.append("missing decision_threshold")
    rules = []
    entries = doc.get("rules", [])
    if not isinstance(entries, list):
        problems.append("rules must be a list")
        entries = []
    for index, obj in enumerate(entries):
        rule = _rule_from_object(obj, index, problems)
        if rule is not None:
            rules.append(rule)
    if problems:
        raise ConfigurationError("invalid ruleset:\n" + "\n".join(problems))
    try:
        return RuleSet(rules=rules, decision_threshold=float(doc["decision_threshold"]))
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"invalid ruleset: bad decision_threshold ({exc})") from exc


def load_ruleset(path) -> RuleSet:
    """Load and fully validate a ``marketguard-rules/1`` config file."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"ruleset file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("ruleset file must contain a JSON object")
    return parse_ruleset(doc)


def default_ruleset() -> RuleSet:
    """The illustrative ruleset shipped with the package."""
    text = resources.files("marketguard.resources").joinpath("default_rules.json").read_text(encoding="utf-8")
    return parse_ruleset(json.loads(text))
