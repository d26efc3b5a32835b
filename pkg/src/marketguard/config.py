"""Static run configuration: one JSON file, overridable per command flag.

Sections and defaults are below; unknown sections or keys are rejected so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import json
from pathlib import Path

from .detection import FusionPolicy
from .exceptions import ConfigurationError
from .management import PolicyConfig
from .synthetic import EffectSizes, GeneratorConfig

DEFAULTS: dict = {
    "paths": {
        "dataset": None,
        "ruleset": None,
        "model": None,
        "reputation": None,
        "expert_inputs": None,
        "verdicts": None,
        "actions_ledger": None,
    },
    "train": {
        "kernel": "rbf",
        "c": 1.0,
        "gamma": "auto",
        "degree": 2,
        "offset": 1.0,
        "kkt_tol": 1e-3,
        "value_eps": 1e-8,
        "max_passes": 200,
        "rng_seed": 0,
    },
    "generator": {
        "n_sellers": 500,
        "fraud_fraction": 0.2,
        "window_days": 90,
        "cold_start_fraction": 0.05,
        "rng_seed": 0,
        "effect_sizes": {
            "listing_accuracy_drop": 0.25,
            "sla_adherence_drop": 0.30,
            "return_rate_boost": 0.25,
            "complaint_rate_boost": 0.12,
            "complaint_severity_boost": 2.0,
            "sentiment_drop": 0.8,
        },
    },
    "fusion": {
        "w_rules": 0.4,
        "w_svm": 0.6,
        "fusion_threshold": 0.5,
    },
    "actions": {
        "warn_band": [0.5, 0.7],
        "suspend_band": [0.7, 0.9],
        "ban_floor": 0.9,
        "grace_period_days": 14,
        "repeat_escalation": True,
    },
}


def _merge(defaults: dict, overrides: dict, trail: str) -> dict:
    merged = dict(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            raise ConfigurationError(f"unknown config key {trail}{key!r}")
        if isinstance(defaults[key], dict) and isinstance(value, dict):
            merged[key] = _merge(defaults[key], value, f"{trail}{key}.")
        else:
            merged[key] = value
    return merged


def load_config(path=None) -> dict:
    """Defaults, deep-merged with the JSON config file when one is given."""
    if path is None:
        return json.loads(json.dumps(DEFAULTS))
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("config file must contain a JSON object")
    return _merge(DEFAULTS, doc, "")


def generator_config(cfg: dict, seed: int | None = None) -> GeneratorConfig:
    section = cfg["generator"]
    return GeneratorConfig(
        n_sellers=section["n_sellers"],
        fraud_fraction=section["fraud_fraction"],
        window_days=section["window_days"],
        cold_start_fraction=section["cold_start_fraction"],
        effect_sizes=EffectSizes(**section["effect_sizes"]),
        rng_seed=section["rng_seed"] if seed is None else seed,
    )


def fusion_policy(cfg: dict) -> FusionPolicy:
    section = cfg["fusion"]
    return FusionPolicy(
        w_rules=section["w_rules"],
        w_svm=section["w_svm"],
        fusion_threshold=section["fusion_threshold"],
    )


def action_policy(cfg: dict) -> PolicyConfig:
    section = cfg["actions"]
    return PolicyConfig(
        warn_band=tuple(section["warn_band"]),
        suspend_band=tuple(section["suspend_band"]),
        ban_floor=section["ban_floor"],
        grace_period_days=section["grace_period_days"],
        repeat_escalation=section["repeat_escalation"],
    )
