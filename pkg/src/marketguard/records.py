"""Seller activity data model and report-based validation.

All timestamps are integer seconds since the Unix epoch, UTC. Record types are
plain containers; range checks live in :func:`record_violations` so that file
ingestion and :func:`validate_history` share one rule set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

RETURN_REASONS = ("defective", "not_as_described", "never_arrived", "other")


@dataclass(frozen=True)
class SellerProfile:
    seller_id: str
    display_name: str
    address: str
    email_domain: str
    enrolled_at: int
    tax_id: str | None = None
    bank_account_hash: str | None = None


@dataclass(frozen=True)
class Listing:
    occurred_at: int
    declared_attributes_ok: bool


@dataclass(frozen=True)
class Order:
    occurred_at: int
    amount: float
    promised_ship: int
    actual_ship: int | None = None


@dataclass(frozen=True)
class Return:
    occurred_at: int
    order_ref: str
    reason: str


@dataclass(frozen=True)
class Complaint:
    occurred_at: int
    severity: int


@dataclass(frozen=True)
class SocialSignal:
    occurred_at: int
    sentiment: float
    mentions: int


ActivityRecord = Listing | Order | Return | Complaint | SocialSignal


@dataclass
class SellerHistory:
    profile: SellerProfile
    records: list[ActivityRecord] = field(default_factory=list)
    window: tuple[int, int] = (0, 0)


@dataclass
class LabeledSeller:
    history: SellerHistory
    label: int  # +1 fraudulent, -1 normal


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations


def record_violations(record: ActivityRecord) -> list[str]:
    """Range violations for a single record; empty list means the record is valid."""
    problems = []
    if isinstance(record, Order):
        if record.amount < 0:
            problems.append(f"order amount must be >= 0, got {record.amount}")
    elif isinstance(record, Return):
        if record.reason not in RETURN_REASONS:
            problems.append(f"return reason must be one of {RETURN_REASONS}, got {record.reason!r}")
    elif isinstance(record, Complaint):
        if not 1 <= record.severity <= 5:
            problems.append(f"complaint severity must be in [1, 5], got {record.severity}")
    elif isinstance(record, SocialSignal):
        if not -1.0 <= record.sentiment <= 1.0:
            problems.append(f"sentiment must be in [-1, 1], got {record.sentiment}")
        if record.mentions < 0:
            problems.append(f"mentions must be >= 0, got {record.mentions}")
    return problems


def validate_history(history: SellerHistory) -> ValidationReport:
    """Report every invariant violation; an empty report means the history is valid."""
    report = ValidationReport()
    if not history.profile.seller_id:
        report.violations.append("seller_id is empty")
    start, end = history.window
    if start > end:
        report.violations.append(f"window start {start} is after window end {end}")
    timestamps = [record.occurred_at for record in history.records]
    if timestamps != sorted(timestamps):
        report.violations.append("records not time-ordered")
    for index, record in enumerate(history.records):
        label = f"record {index} ({type(record).__name__})"
        if not start <= record.occurred_at <= end:
            report.violations.append(f"{label} dated {record.occurred_at} outside window [{start}, {end}]")
        for problem in record_violations(record):
            report.violations.append(f"{label}: {problem}")
    return report
