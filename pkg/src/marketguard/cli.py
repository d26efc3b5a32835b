"""Command-line front end: generate, train, detect, evaluate, act, rules-check.

Every command is deterministic given identical inputs and seeds. Exit codes:
0 success, 2 input/config error, 3 training degeneracy, 4 feature-manifest
mismatch; no other codes are used.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import config as config_mod
from .dataset_io import load_histories, load_labeled, save_labeled
from .detection import (
    FraudDetector,
    Verdict,
    load_expert_inputs,
    load_reputation,
    read_verdicts,
    verdict_object,
    write_verdicts,
)
from .exceptions import (
    ConfigurationError,
    ManifestMismatchError,
    MarketGuardError,
    TrainingError,
)
from .features import extract, feature_manifest, feature_matrix, fit_scaling
from .management import Action, decide_action, append_actions, read_actions
from .model import load_model, save_model
from .rules import default_ruleset, load_ruleset
from .smo import SMOClassifier
from .synthetic import generate_synthetic

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_TRAINING = 3
EXIT_MANIFEST = 4


def _emit(args, human: str, machine: dict) -> None:
    if args.output == "machine":
        print(json.dumps(machine))
    else:
        print(human)


def _resolve(args, cfg, attr: str, path_key: str, required: bool = True):
    value = getattr(args, attr, None) or cfg["paths"][path_key]
    if required and value is None:
        raise ConfigurationError(f"no {path_key} path given (flag or config)")
    return value


def cmd_generate(args, cfg) -> int:
    section = dict(cfg["generator"])
    for key in ("n_sellers", "fraud_fraction", "window_days", "cold_start_fraction"):
        override = getattr(args, key, None)
        if override is not None:
            section[key] = override
    cfg = {**cfg, "generator": section}
    gen_config = config_mod.generator_config(cfg, seed=args.seed)
    out_path = _resolve(args, cfg, "out", "dataset")
    sellers = generate_synthetic(gen_config)
    save_labeled(out_path, sellers)
    n_fraud = sum(1 for s in sellers if s.label == 1)
    _emit(
        args,
        f"wrote {len(sellers)} sellers ({n_fraud} fraudulent, {len(sellers) - n_fraud} normal) to {out_path}",
        {"kind": "summary", "sellers": len(sellers), "fraudulent": n_fraud, "path": str(out_path)},
    )
    return EXIT_OK


def cmd_train(args, cfg) -> int:
    section = dict(cfg["train"])
    for key in ("kernel", "c", "gamma", "degree", "offset", "kkt_tol", "max_passes"):
        override = getattr(args, key, None)
        if override is not None:
            section[key] = override
    if args.seed is not None:
        section["rng_seed"] = args.seed

    dataset_path = _resolve(args, cfg, "dataset", "dataset")
    model_path = _resolve(args, cfg, "model_out", "model")
    labeled = load_labeled(dataset_path)

    usable = [entry for entry in labeled if extract(entry.history).has_history]
    skipped = len(labeled) - len(usable)
    vectors = [extract(entry.history) for entry in usable]
    labels = [entry.label for entry in usable]

    scaler = fit_scaling(vectors)
    X = scaler.transform(feature_matrix(vectors))
    clf = SMOClassifier(
        kernel=section["kernel"],
        C=section["c"],
        gamma=section["gamma"],
        degree=section["degree"],
        coef0=section["offset"],
        kkt_tol=section["kkt_tol"],
        value_eps=section["value_eps"],
        max_passes=section["max_passes"],
        random_state=section["rng_seed"],
    )
    clf.fit(X, labels)
    save_model(
        model_path,
        clf.model_,
        feature_manifest=feature_manifest(),
        scaling=scaler.to_dict(),
    )
    _emit(
        args,
        f"trained on {len(usable)} sellers ({skipped} without history skipped): "
        f"{clf.support_vectors_.shape[0]} support vectors, "
        f"max KKT violation {clf.kkt_violation_:.2e}; model written to {model_path}",
        {
            "kind": "summary",
            "trained_on": len(usable),
            "skipped_no_history": skipped,
            "support_vectors": int(clf.support_vectors_.shape[0]),
            "kkt_violation": clf.kkt_violation_,
            "path": str(model_path),
        },
    )
    return EXIT_OK


def _build_detector(args, cfg) -> FraudDetector:
    model_path = _resolve(args, cfg, "model", "model")
    bundle = load_model(model_path)
    rules_path = _resolve(args, cfg, "rules", "ruleset", required=False)
    ruleset = load_ruleset(rules_path) if rules_path else default_ruleset()
    reputation_path = _resolve(args, cfg, "reputation", "reputation", required=False)
    reputation = load_reputation(reputation_path) if reputation_path else []
    experts_path = _resolve(args, cfg, "experts", "expert_inputs", required=False)
    expert_inputs = load_expert_inputs(experts_path) if experts_path else None
    return FraudDetector.from_bundle(
        bundle,
        ruleset,
        reputation=reputation,
        expert_inputs=expert_inputs,
        policy=config_mod.fusion_policy(cfg),
    )


def cmd_detect(args, cfg) -> int:
    detector = _build_detector(args, cfg)
    histories = load_histories(_resolve(args, cfg, "dataset", "dataset"))
    verdicts = detector.detect_all(histories)

    verdicts_path = _resolve(args, cfg, "verdicts_out", "verdicts", required=False)
    if verdicts_path:
        write_verdicts(verdicts_path, verdicts)

    counts = {v.value: 0 for v in Verdict}
    for verdict in verdicts:
        counts[verdict.verdict.value] += 1
        if args.output == "machine":
            print(json.dumps(verdict_object(verdict)))
        else:
            print(f"{verdict.seller_id}: {verdict.verdict.value} (confidence {verdict.confidence:.3f})")
    _emit(
        args,
        "summary: " + ", ".join(f"{k}={v}" for k, v in counts.items()),
        {"kind": "summary", **counts},
    )
    return EXIT_OK


def cmd_evaluate(args, cfg) -> int:
    detector = _build_detector(args, cfg)
    labeled = load_labeled(_resolve(args, cfg, "dataset", "dataset"))
    tp = fp = fn = tn = insufficient = 0
    for entry in labeled:
        verdict = detector.detect(entry.history)
        if verdict.verdict is Verdict.INSUFFICIENT_HISTORY:
            insufficient += 1
            continue
        predicted_fraud = verdict.verdict is Verdict.FRAUDULENT
        actually_fraud = entry.label == 1
        if predicted_fraud and actually_fraud:
            tp += 1
        elif predicted_fraud:
            fp += 1
        elif actually_fraud:
            fn += 1
        else:
            tn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    _emit(
        args,
        (
            f"precision {precision:.4f}, recall {recall:.4f} on the fraudulent class\n"
            f"confusion: tp={tp} fp={fp} fn={fn} tn={tn}\n"
            f"insufficient history (excluded): {insufficient}"
        ),
        {
            "kind": "metrics",
            "precision": precision,
            "recall": recall,
            "tp": tp,
            "fp": fp,
            "fn": fn,
            "tn": tn,
            "insufficient_history": insufficient,
        },
    )
    return EXIT_OK


def cmd_act(args, cfg) -> int:
    policy = config_mod.action_policy(cfg)
    verdicts = read_verdicts(_resolve(args, cfg, "verdicts", "verdicts"))
    ledger_path = _resolve(args, cfg, "ledger", "actions_ledger")
    existing = read_actions(ledger_path) if Path(ledger_path).exists() else []
    now = args.now if args.now is not None else int(time.time())

    appended = []
    for verdict in verdicts:
        mine = [a for a in existing if a.seller_id == verdict.seller_id]
        # idempotency: skip verdicts this ledger has already acted on
        if any(
            a.source_verdict == verdict.verdict.value
            and a.source_confidence == verdict.confidence
            for a in mine
        ):
            continue
        decision = decide_action(verdict, policy, mine, now)
        if decision.action is Action.NO_ACTION:
            continue
        appended.append(decision)
    append_actions(ledger_path, appended)

    final = existing + appended
    pending = [a for a in final if a.action is Action.SUSPEND_WITH_GRACE and a.deadline and a.deadline > now]
    expired = [a for a in final if a.action is Action.SUSPEND_WITH_GRACE and a.deadline and a.deadline <= now]
    counts = {action.value: sum(1 for a in appended if a.action is action) for action in Action}
    _emit(
        args,
        (
            f"appended {len(appended)} actions: "
            + ", ".join(f"{k}={v}" for k, v in counts.items() if k != Action.NO_ACTION.value)
            + f"\ngrace deadlines: {len(pending)} pending, {len(expired)} expired"
        ),
        {
            "kind": "summary",
            "appended": len(appended),
            **{k: v for k, v in counts.items() if k != Action.NO_ACTION.value},
            "grace_pending": len(pending),
            "grace_expired": len(expired),
        },
    )
    return EXIT_OK


def cmd_rules_check(args, cfg) -> int:
    rules_path = _resolve(args, cfg, "rules", "ruleset")
    ruleset = load_ruleset(rules_path)
    _emit(
        args,
        f"ruleset ok: {len(ruleset.rules)} rules, decision threshold {ruleset.decision_threshold}",
        {"kind": "summary", "rules": len(ruleset.rules), "decision_threshold": ruleset.decision_threshold},
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marketguard",
        description="Marketplace seller fraud detection pipeline.",
    )
    parser.add_argument("--config", help="path to the JSON run config")
    parser.add_argument("--seed", type=int, help="override the RNG seed for this command")
    parser.add_argument("--output", choices=("human", "machine"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic labeled dataset")
    p.add_argument("--out", help="dataset path to write")
    p.add_argument("--n-sellers", dest="n_sellers", type=int)
    p.add_argument("--fraud-fraction", dest="fraud_fraction", type=float)
    p.add_argument("--window-days", dest="window_days", type=int)
    p.add_argument("--cold-start-fraction", dest="cold_start_fraction", type=float)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="fit the classifier on a labeled dataset")
    p.add_argument("--dataset")
    p.add_argument("--model-out", dest="model_out")
    p.add_argument("--kernel", choices=("linear", "poly", "rbf"))
    p.add_argument("--c", type=float)
    p.add_argument("--gamma")
    p.add_argument("--degree", type=int)
    p.add_argument("--offset", type=float)
    p.add_argument("--kkt-tol", dest="kkt_tol", type=float)
    p.add_argument("--max-passes", dest="max_passes", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("detect", help="emit one verdict per seller")
    p.add_argument("--dataset")
    p.add_argument("--model")
    p.add_argument("--rules")
    p.add_argument("--reputation")
    p.add_argument("--experts")
    p.add_argument("--verdicts-out", dest="verdicts_out")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("evaluate", help="score verdicts against labels")
    p.add_argument("--dataset")
    p.add_argument("--model")
    p.add_argument("--rules")
    p.add_argument("--reputation")
    p.add_argument("--experts")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("act", help="apply the action policy to a verdicts file")
    p.add_argument("--verdicts")
    p.add_argument("--ledger")
    p.add_argument("--now", type=int, help="decision timestamp (epoch seconds)")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("rules-check", help="validate a ruleset file")
    p.add_argument("--rules")
    p.set_defaults(func=cmd_rules_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_mod.load_config(args.config)
        return args.func(args, cfg)
    except ManifestMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MANIFEST
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except (MarketGuardError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
