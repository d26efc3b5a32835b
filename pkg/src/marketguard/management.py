"""Policy layer: map verdicts to marketplace actions.

Fraudulent verdicts climb a confidence ladder (warn, suspend with a grace
deadline, ban); reputation-hit verdicts always ban. With repeat escalation
enabled, a seller with a prior warn/suspend on the ledger moves one step up
the ladder. Normal and insufficient-history verdicts never trigger an action.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .dataset_io import iter_objects
from .detection import FraudVerdict, Verdict
from .exceptions import ConfigurationError, DatasetFormatError

DAY = 86_400


class Action(str, Enum):
    NO_ACTION = "NoAction"
    WARN = "Warn"
    SUSPEND_WITH_GRACE = "SuspendWithGrace"
    BAN = "Ban"


_LADDER = [Action.NO_ACTION, Action.WARN, Action.SUSPEND_WITH_GRACE, Action.BAN]


@dataclass(frozen=True)
class PolicyConfig:
    warn_band: tuple[float, float] = (0.5, 0.7)
    suspend_band: tuple[float, float] = (0.7, 0.9)
    ban_floor: float = 0.9
    grace_period_days: int = 14
    repeat_escalation: bool = True

    def __post_init__(self):
        w_lo, w_hi = self.warn_band
        s_lo, s_hi = self.suspend_band
        if not (0.0 <= w_lo < w_hi <= s_lo < s_hi <= self.ban_floor <= 1.0):
            raise ConfigurationError(
                "action bands must be disjoint and ordered warn < suspend < ban, got "
                f"warn={self.warn_band}, suspend={self.suspend_band}, ban_floor={self.ban_floor}"
            )
        if int(self.grace_period_days) != self.grace_period_days or self.grace_period_days <= 0:
            raise ConfigurationError(
                f"grace_period_days must be a positive integer, got {self.grace_period_days}"
            )


@dataclass(frozen=True)
class ActionDecision:
    seller_id: str
    action: Action
    rationale: str
    deadline: int | None = None
    decided_at: int = 0
    source_verdict: str = ""
    source_confidence: float = 0.0


def _band_action(confidence: float, policy: PolicyConfig) -> Action:
    if confidence >= policy.ban_floor:
        return Action.BAN
    if policy.suspend_band[0] <= confidence < policy.suspend_band[1]:
        return Action.SUSPEND_WITH_GRACE
    if policy.warn_band[0] <= confidence < policy.warn_band[1]:
        return Action.WARN
    return Action.NO_ACTION


def decide_action(verdict: FraudVerdict, policy: PolicyConfig,
                  prior_actions: list[ActionDecision], now: int) -> ActionDecision:
    """Choose the action for one verdict given the seller's prior actions."""
    if verdict.verdict is not Verdict.FRAUDULENT:
        action = Action.NO_ACTION
        rationale = f"verdict {verdict.verdict.value}: no action"
    elif any(name == "reputation_hit" for name, _ in verdict.contributing):
        action = Action.BAN
        rationale = "matched a banned seller in the reputation store"
    else:
        action = _band_action(verdict.confidence, policy)
        rationale = f"fraudulent with confidence {verdict.confidence:.4f}"
        if policy.repeat_escalation and any(
            prior.action in (Action.WARN, Action.SUSPEND_WITH_GRACE) for prior in prior_actions
        ):
            step = min(_LADDER.index(action) + 1, len(_LADDER) - 1)
            if _LADDER[step] is not action:
                action = _LADDER[step]
                rationale += "; escalated for repeat offense"

    deadline = now + policy.grace_period_days * DAY if action is Action.SUSPEND_WITH_GRACE else None
    return ActionDecision(
        seller_id=verdict.seller_id,
        action=action,
        rationale=rationale,
        deadline=deadline,
        decided_at=now,
        source_verdict=verdict.verdict.value,
        source_confidence=verdict.confidence,
    )


# --- actions ledger (dataset format family) ---------------------------------

def read_actions(path) -> list[ActionDecision]:
    actions = []
    for line_no, obj in iter_objects(path):
        if obj["kind"] != "action":
            raise DatasetFormatError(f"line {line_no}: expected kind 'action', got {obj['kind']!r}")
        try:
            actions.append(ActionDecision(
                seller_id=str(obj["seller_id"]),
                action=Action(obj["action"]),
                rationale=str(obj["rationale"]),
                deadline=None if obj.get("deadline") is None else int(obj["deadline"]),
                decided_at=int(obj.get("decided_at", 0)),
                source_verdict=str(obj.get("source_verdict", "")),
                source_confidence=float(obj.get("source_confidence", 0.0)),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"line {line_no}: bad action record ({exc})") from exc
    return actions


def action_object(decision: ActionDecision) -> dict:
    return {
        "kind": "action",
        "seller_id": decision.seller_id,
        "action": decision.action.value,
        "deadline": decision.deadline,
        "rationale": decision.rationale,
        "decided_at": decision.decided_at,
        "source_verdict": decision.source_verdict,
        "source_confidence": decision.source_confidence,
    }


def append_actions(path, decisions: list[ActionDecision]) -> None:
    """Append to the ledger, creating the file if needed."""
    text = "".join(json.dumps(action_object(d)) + "\n" for d in decisions)
    with Path(path).open("a", encoding="utf-8") as handle:
        handle.write(text)
