"""Newline-delimited file formats for seller data and pipeline artifacts.

Every line is one self-describing JSON object with a ``kind`` field. Seller
datasets use kinds profile/listing/order/return/complaint/social/label;
reputation stores, expert-input stores, verdict reports, and the actions
ledger reuse the same framing with kinds reputation/expert/verdict/action.
See docs/formats.md for the full field tables and a canonical example.
"""

from __future__ import annotations

import json
from pathlib import Path

from .exceptions import DatasetFormatError, DatasetValidationError
from .records import (
    RETURN_REASONS,
    Complaint,
    LabeledSeller,
    Listing,
    Order,
    Return,
    SellerHistory,
    SellerProfile,
    SocialSignal,
    record_violations,
)

_ACTIVITY_KINDS = ("listing", "order", "return", "complaint", "social")


def _parse_error(line_no: int, message: str) -> DatasetFormatError:
    return DatasetFormatError(f"line {line_no}: {message}")


def _require(obj: dict, keys: tuple[str, ...], line_no: int) -> None:
    missing = [k for k in keys if k not in obj]
    if missing:
        raise _parse_error(line_no, f"missing fields {missing} for kind {obj.get('kind')!r}")


def _record_from_object(obj: dict, line_no: int):
    kind = obj["kind"]
    try:
        if kind == "listing":
            _require(obj, ("occurred_at", "declared_attributes_ok"), line_no)
            record = Listing(
                occurred_at=int(obj["occurred_at"]),
                declared_attributes_ok=bool(obj["declared_attributes_ok"]),
            )
        elif kind == "order":
            _require(obj, ("occurred_at", "amount", "promised_ship"), line_no)
            actual = obj.get("actual_ship")
            record = Order(
                occurred_at=int(obj["occurred_at"]),
                amount=float(obj["amount"]),
                promised_ship=int(obj["promised_ship"]),
                actual_ship=None if actual is None else int(actual),
            )
        elif kind == "return":
            _require(obj, ("occurred_at", "order_ref", "reason"), line_no)
            record = Return(
                occurred_at=int(obj["occurred_at"]),
                order_ref=str(obj["order_ref"]),
                reason=str(obj["reason"]),
            )
        elif kind == "complaint":
            _require(obj, ("occurred_at", "severity"), line_no)
            record = Complaint(occurred_at=int(obj["occurred_at"]), severity=int(obj["severity"]))
        else:
            _require(obj, ("occurred_at", "sentiment", "mentions"), line_no)
            record = SocialSignal(
                occurred_at=int(obj["occurred_at"]),
                sentiment=float(obj["sentiment"]),
                mentions=int(obj["mentions"]),
            )
    except (TypeError, ValueError) as exc:
        raise _parse_error(line_no, f"bad field value: {exc}") from exc
    problems = record_violations(record)
    if problems:
        raise _parse_error(line_no, "; ".join(problems))
    return record


def _profile_from_object(obj: dict, line_no: int) -> tuple[SellerProfile, tuple[int, int]]:
    _require(
        obj,
        ("seller_id", "display_name", "address", "email_domain", "enrolled_at", "window_start", "window_end"),
        line_no,
    )
    try:
        profile = SellerProfile(
            seller_id=str(obj["seller_id"]),
            display_name=str(obj["display_name"]),
            address=str(obj["address"]),
            email_domain=str(obj["email_domain"]),
            enrolled_at=int(obj["enrolled_at"]),
            tax_id=None if obj.get("tax_id") is None else str(obj["tax_id"]),
            bank_account_hash=None if obj.get("bank_account_hash") is None else str(obj["bank_account_hash"]),
        )
        window = (int(obj["window_start"]), int(obj["window_end"]))
    except (TypeError, ValueError) as exc:
        raise _parse_error(line_no, f"bad field value: {exc}") from exc
    if not profile.seller_id:
        raise _parse_error(line_no, "seller_id is empty")
    return profile, window


def iter_objects(path):
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise _parse_error(line_no, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict) or "kind" not in obj:
            raise _parse_error(line_no, "expected an object with a 'kind' field")
        yield line_no, obj


def read_dataset(path) -> tuple[list[SellerHistory], dict[str, int]]:
    """Parse a seller dataset; returns (histories, labels by seller id).

    Activity records are normalized into time order. Raises DatasetFormatError
    for unparsable lines and DatasetValidationError for cross-record problems.
    """
    profiles: dict[str, SellerProfile] = {}
    windows: dict[str, tuple[int, int]] = {}
    records: dict[str, list] = {}
    labels: dict[str, int] = {}
    order_of_appearance: list[str] = []
    pending: list[tuple[int, str, dict]] = []

    for line_no, obj in iter_objects(path):
        kind = obj["kind"]
        if kind == "profile":
            profile, window = _profile_from_object(obj, line_no)
            if profile.seller_id in profiles:
                raise DatasetValidationError(f"duplicate seller_id {profile.seller_id!r} (line {line_no})")
            profiles[profile.seller_id] = profile
            windows[profile.seller_id] = window
            records[profile.seller_id] = []
            order_of_appearance.append(profile.seller_id)
        elif kind in _ACTIVITY_KINDS:
            _require(obj, ("seller_id",), line_no)
            pending.append((line_no, str(obj["seller_id"]), obj))
        elif kind == "label":
            _require(obj, ("seller_id", "label"), line_no)
            value = obj["label"]
            if value not in (-1, 1):
                raise _parse_error(line_no, f"label must be -1 or 1, got {value!r}")
            seller_id = str(obj["seller_id"])
            if seller_id in labels and labels[seller_id] != value:
                raise DatasetValidationError(
                    f"conflicting labels for seller {seller_id!r} (line {line_no})"
                )
            labels[seller_id] = int(value)
        else:
            raise _parse_error(line_no, f"unknown kind {kind!r}")

    for line_no, seller_id, obj in pending:
        if seller_id not in profiles:
            raise DatasetValidationError(
                f"activity for unknown seller {seller_id!r} (line {line_no})"
            )
        records[seller_id].append(_record_from_object(obj, line_no))

    for seller_id in labels:
        if seller_id not in profiles:
            raise DatasetValidationError(f"label for unknown seller {seller_id!r}")

    histories = []
    for seller_id in order_of_appearance:
        history = SellerHistory(
            profile=profiles[seller_id],
            records=sorted(records[seller_id], key=lambda r: r.occurred_at),
            window=windows[seller_id],
        )
        histories.append(history)
    return histories, labels


def load_histories(path) -> list[SellerHistory]:
    """Seller histories from a dataset file; label lines, if any, are ignored."""
    histories, _ = read_dataset(path)
    return histories


def load_labeled(path) -> list[LabeledSeller]:
    """Labeled sellers from a dataset file; every seller must carry a label line."""
    histories, labels = read_dataset(path)
    missing = [h.profile.seller_id for h in histories if h.profile.seller_id not in labels]
    if missing:
        raise DatasetValidationError(f"sellers without labels: {missing[:5]}" + ("..." if len(missing) > 5 else ""))
    return [LabeledSeller(history=h, label=labels[h.profile.seller_id]) for h in histories]


def _profile_object(history: SellerHistory) -> dict:
    profile = history.profile
    return {
        "kind": "profile",
        "seller_id": profile.seller_id,
        "display_name": profile.display_name,
        "tax_id": profile.tax_id,
        "bank_account_hash": profile.bank_account_hash,
        "address": profile.address,
        "email_domain": profile.email_domain,
        "enrolled_at": profile.enrolled_at,
        "window_start": history.window[0],
        "window_end": history.window[1],
    }


def _record_object(seller_id: str, record) -> dict:
    if isinstance(record, Listing):
        return {
            "kind": "listing",
            "seller_id": seller_id,
            "occurred_at": record.occurred_at,
            "declared_attributes_ok": record.declared_attributes_ok,
        }
    if isinstance(record, Order):
        return {
            "kind": "order",
            "seller_id": seller_id,
            "occurred_at": record.occurred_at,
            "amount": record.amount,
            "promised_ship": record.promised_ship,
            "actual_ship": record.actual_ship,
        }
    if isinstance(record, Return):
        return {
            "kind": "return",
            "seller_id": seller_id,
            "occurred_at": record.occurred_at,
            "order_ref": record.order_ref,
            "reason": record.reason,
        }
    if isinstance(record, Complaint):
        return {
            "kind": "complaint",
            "seller_id": seller_id,
            "occurred_at": record.occurred_at,
            "severity": record.severity,
        }
    return {
        "kind": "social",
        "seller_id": seller_id,
        "occurred_at": record.occurred_at,
        "sentiment": record.sentiment,
        "mentions": record.mentions,
    }


def dump_lines(path, objects) -> None:
    text = "".join(json.dumps(obj) + "\n" for obj in objects)
    Path(path).write_text(text, encoding="utf-8")


def save_histories(path, histories: list[SellerHistory]) -> None:
    objects = []
    for history in histories:
        objects.append(_profile_object(history))
        seller_id = history.profile.seller_id
        for record in sorted(history.records, key=lambda r: r.occurred_at):
            objects.append(_record_object(seller_id, record))
    dump_lines(path, objects)


def save_labeled(path, labeled: list[LabeledSeller]) -> None:
    objects = []
    for entry in labeled:
        objects.append(_profile_object(entry.history))
        seller_id = entry.history.profile.seller_id
        for record in sorted(entry.history.records, key=lambda r: r.occurred_at):
            objects.append(_record_object(seller_id, record))
        objects.append({"kind": "label", "seller_id": seller_id, "label": entry.label})
    dump_lines(path, objects)
