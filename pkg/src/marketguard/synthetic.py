"""Seeded synthetic generator for labeled seller histories.

Fraudulent sellers draw their activity from distributions shifted by the
configured effect sizes: lower listing accuracy, later shipping, more returns,
more and harsher complaints, and more negative social sentiment. Normal
sellers use the baseline rates. A configurable slice of the normal population
is generated with zero orders ("cold start") to exercise the
insufficient-history path downstream.

Identical configs produce byte-identical datasets: all draws come from one
``numpy`` generator seeded with ``rng_seed`` and the record layout is fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError
from .records import (
    Complaint,
    LabeledSeller,
    Listing,
    Order,
    Return,
    SellerHistory,
    SellerProfile,
    SocialSignal,
)

DAY = 86_400
WINDOW_END_DEFAULT = 1_704_067_200  # 2024-01-01T00:00:00Z

_NAME_LEFT = ("Prime", "Golden", "Urban", "Cedar", "Nova", "Summit", "Harbor", "Velvet", "Atlas", "Maple")
_NAME_RIGHT = ("Goods", "Trading", "Supply", "Outlet", "Market", "Emporium", "Depot", "Collective", "Wares", "Exchange")
_STREETS = ("Maple St", "Oak Ave", "Birch Rd", "Elm Blvd", "Cedar Ln", "Pine Ct", "Willow Way", "Aspen Dr")
_CITIES = ("Riverton", "Lakewood", "Fairview", "Springdale", "Brookfield", "Hillcrest", "Greenville", "Easton")
_TLDS = ("example", "test", "invalid")

# Baseline behavior of a normal seller; effect sizes shift these for fraud.
BASE_LISTING_ACCURACY = 0.96
BASE_SLA_ADHERENCE = 0.93
BASE_RETURN_RATE = 0.05
BASE_COMPLAINT_RATE = 0.03
BASE_COMPLAINT_SEVERITY = 2.0
BASE_SENTIMENT = 0.5

_RETURN_REASONS_NORMAL = ("defective", "other", "not_as_described")
_RETURN_REASONS_FRAUD = ("never_arrived", "not_as_described", "defective")


@dataclass(frozen=True)
class EffectSizes:
    """Distribution shifts applied to fraudulent sellers."""

    listing_accuracy_drop: float = 0.25
    sla_adherence_drop: float = 0.30
    return_rate_boost: float = 0.25
    complaint_rate_boost: float = 0.12
    complaint_severity_boost: float = 2.0
    sentiment_drop: float = 0.8


@dataclass(frozen=True)
class GeneratorConfig:
    n_sellers: int = 500
    fraud_fraction: float = 0.2
    window_days: int = 90
    cold_start_fraction: float = 0.05
    effect_sizes: EffectSizes = field(default_factory=EffectSizes)
    rng_seed: int = 0

    def __post_init__(self):
        if int(self.n_sellers) != self.n_sellers or self.n_sellers <= 0:
            raise InvalidInputError(f"n_sellers must be a positive integer, got {self.n_sellers}")
        if not 0.0 <= self.fraud_fraction <= 1.0:
            raise InvalidInputError(f"fraud_fraction must be in [0, 1], got {self.fraud_fraction}")
        if int(self.window_days) != self.window_days or self.window_days <= 0:
            raise InvalidInputError(f"window_days must be a positive integer, got {self.window_days}")
        if not 0.0 <= self.cold_start_fraction <= 1.0:
            raise InvalidInputError(
                f"cold_start_fraction must be in [0, 1], got {self.cold_start_fraction}"
            )
        if self.fraud_fraction + self.cold_start_fraction > 1.0:
            raise InvalidInputError("fraud_fraction + cold_start_fraction must not exceed 1")
        if int(self.rng_seed) != self.rng_seed or self.rng_seed < 0:
            raise InvalidInputError(f"rng_seed must be a non-negative integer, got {self.rng_seed}")


def _profile(rng: np.random.Generator, seller_id: str, window_start: int) -> SellerProfile:
    name = f"{_NAME_LEFT[rng.integers(len(_NAME_LEFT))]} {_NAME_RIGHT[rng.integers(len(_NAME_RIGHT))]}"
    street = _STREETS[rng.integers(len(_STREETS))]
    city = _CITIES[rng.integers(len(_CITIES))]
    address = f"{int(rng.integers(1, 999))} {street}, {city}"
    domain = f"{name.split()[0].lower()}{int(rng.integers(100)):02d}.{_TLDS[rng.integers(len(_TLDS))]}"
    tax_id = f"TX{int(rng.integers(10**6)):06d}" if rng.random() < 0.8 else None
    bank = "".join(f"{b:02x}" for b in rng.integers(0, 256, size=8)) if rng.random() < 0.9 else None
    return SellerProfile(
        seller_id=seller_id,
        display_name=name,
        address=address,
        email_domain=domain,
        enrolled_at=int(window_start - rng.integers(30, 720) * DAY),
        tax_id=tax_id,
        bank_account_hash=bank,
    )


def _seller_records(rng: np.random.Generator, seller_id: str, fraudulent: bool,
                    cold_start: bool, window: tuple[int, int], effects: EffectSizes) -> list:
    start, end = window
    records: list = []

    if fraudulent:
        accuracy = BASE_LISTING_ACCURACY - effects.listing_accuracy_drop
        sla = BASE_SLA_ADHERENCE - effects.sla_adherence_drop
        return_rate = BASE_RETURN_RATE + effects.return_rate_boost
        complaint_rate = BASE_COMPLAINT_RATE + effects.complaint_rate_boost
        severity_mean = BASE_COMPLAINT_SEVERITY + effects.complaint_severity_boost
        sentiment_mean = BASE_SENTIMENT - effects.sentiment_drop
        never_ship = 0.05
        reasons = _RETURN_REASONS_FRAUD
    else:
        accuracy = BASE_LISTING_ACCURACY
        sla = BASE_SLA_ADHERENCE
        return_rate = BASE_RETURN_RATE
        complaint_rate = BASE_COMPLAINT_RATE
        severity_mean = BASE_COMPLAINT_SEVERITY
        sentiment_mean = BASE_SENTIMENT
        never_ship = 0.01
        reasons = _RETURN_REASONS_NORMAL

    n_listings = 2 + int(rng.poisson(5))
    for t in sorted(int(v) for v in rng.integers(start, end + 1, size=n_listings)):
        records.append(Listing(occurred_at=t, declared_attributes_ok=bool(rng.random() < accuracy)))

    n_orders = 0 if cold_start else 5 + int(rng.poisson(25))
    latest_order_time = end - 12 * DAY  # leave room for follow-up events
    order_times = sorted(int(v) for v in rng.integers(start, latest_order_time + 1, size=n_orders))
    for index, t in enumerate(order_times):
        promised = t + int(rng.integers(1, 6)) * DAY
        if rng.random() < never_ship:
            actual = None
        elif rng.random() < sla:
            actual = promised - int(rng.integers(0, 2 * DAY))
        else:
            actual = promised + int(rng.integers(DAY, 7 * DAY))
        amount = round(float(np.exp(rng.normal(3.2, 0.6))), 2)
        records.append(Order(occurred_at=t, amount=amount, promised_ship=promised, actual_ship=actual))

        order_ref = f"{seller_id}-o{index:04d}"
        if rng.random() < return_rate:
            records.append(Return(
                occurred_at=min(t + int(rng.integers(2, 10)) * DAY, end),
                order_ref=order_ref,
                reason=reasons[rng.integers(len(reasons))],
            ))
        if rng.random() < complaint_rate:
            severity = int(np.clip(round(rng.normal(severity_mean, 0.7)), 1, 5))
            records.append(Complaint(
                occurred_at=min(t + int(rng.integers(1, 12)) * DAY, end),
                severity=severity,
            ))

    n_social = 1 + int(rng.poisson(3))
    for t in sorted(int(v) for v in rng.integers(start, end + 1, size=n_social)):
        sentiment = float(np.clip(rng.normal(sentiment_mean, 0.15), -1.0, 1.0))
        records.append(SocialSignal(occurred_at=t, sentiment=sentiment, mentions=1 + int(rng.poisson(8))))

    records.sort(key=lambda r: r.occurred_at)
    return records


def generate_synthetic(config: GeneratorConfig) -> list[LabeledSeller]:
    """Generate exactly ``n_sellers`` labeled histories, deterministically."""
    rng = np.random.default_rng(config.rng_seed)
    window_end = WINDOW_END_DEFAULT
    window = (window_end - config.window_days * DAY, window_end)

    n = config.n_sellers
    n_fraud = math.floor(n * config.fraud_fraction)
    n_cold = math.floor(n * config.cold_start_fraction)
    roles = ["fraud"] * n_fraud + ["cold"] * n_cold + ["normal"] * (n - n_fraud - n_cold)
    rng.shuffle(roles)

    sellers = []
    for index, role in enumerate(roles):
        seller_id = f"s{index + 1:04d}"
        profile = _profile(rng, seller_id, window[0])
        records = _seller_records(
            rng, seller_id,
            fraudulent=(role == "fraud"),
            cold_start=(role == "cold"),
            window=window,
            effects=config.effect_sizes,
        )
        history = SellerHistory(profile=profile, records=records, window=window)
        sellers.append(LabeledSeller(history=history, label=1 if role == "fraud" else -1))
    return sellers
