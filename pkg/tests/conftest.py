"""Shared fixtures: the two-nurse reference ward and random generators.

The reference ward (two nurses, a day and a night shift over a two-day
week) is small enough to verify by hand and by exhaustive enumeration:
its optimum needs exactly one slack unit, and hiring exactly one extra
nurse at cost 10 removes it.
"""

from __future__ import annotations

import random

import pytest

from rosterly.model import (
    DemandSeries,
    Horizon,
    Nurse,
    NurseContract,
    Penalties,
    RosterInstance,
    ShiftType,
    default_weights,
)

# Hand-checked optimum of the reference ward: three assignments fit
# (2 nurses x 2 shifts minus one night-rest day), one coverage cell
# stays empty, and the weighted workload balances at 2 per nurse.
REF_OBJECTIVE = 1_000_002.0
REF_Z = 2.0
REF_SLACK = 1


def build_reference_ward(
    p1: float = 1.0, big_m: float = 1e6, hire_cost: float = 10.0
) -> RosterInstance:
    shifts = (
        ShiftType("DAY", "Day", 8.0, 4),
        ShiftType("NIGHT", "Night", 8.0, 4, is_night=True),
    )
    horizon = Horizon(weeks=1, day_labels=("d1", "d2"), days_per_week=2)
    contract = NurseContract(h_min=8.0, h_std=16.0, h_max=16.0)
    return RosterInstance(
        shifts=shifts,
        nurses=(
            Nurse("n1", "Avery", contract),
            Nurse("n2", "Blake", contract),
        ),
        horizon=horizon,
        demand=DemandSeries({"d1": 4, "d2": 4}),
        weights=default_weights(shifts, horizon),
        penalties=Penalties(p1=p1, big_m=big_m, hire_cost=hire_cost),
    )


@pytest.fixture
def reference_ward() -> RosterInstance:
    return build_reference_ward()


def random_guarded_instance(rng: random.Random) -> RosterInstance:
    """A random instance small enough for exhaustive enumeration
    (n * |S| * |T| <= 16), with reachable weekly minimums."""
    n = rng.choice([1, 2])
    days_per_week = rng.choice([2, 3])
    n_shifts = rng.choice([1, 2])
    while n * n_shifts * days_per_week > 16:
        n_shifts = 1
    shifts = tuple(
        ShiftType(
            id=f"s{k}",
            name=f"s{k}",
            duration_hours=8.0,
            capacity_per_nurse=rng.choice([2, 3, 4]),
            min_staff=rng.choice([0, 0, 1]),
            is_night=(k == n_shifts - 1 and rng.random() < 0.5),
        )
        for k in range(n_shifts)
    )
    labels = tuple(f"d{t}" for t in range(1, days_per_week + 1))
    horizon = Horizon(weeks=1, day_labels=labels, days_per_week=days_per_week)
    h_min = rng.choice([0.0, 8.0])
    h_max = rng.choice([8.0 * days_per_week, 16.0])
    nurses = tuple(
        Nurse(
            f"n{i}",
            f"n{i}",
            NurseContract(h_min, min(16.0, max(h_min, h_max)), max(h_min, h_max)),
        )
        for i in range(1, n + 1)
    )
    weights = default_weights(shifts, horizon)
    if rng.random() < 0.3:
        w = dict(weights.w)
        key = rng.choice(sorted(w))
        w[key] = rng.choice([0.5, 1.5, 2.5])
        from rosterly.model import WeightTable

        weights = WeightTable(w)
    return RosterInstance(
        shifts=shifts,
        nurses=nurses,
        horizon=horizon,
        demand=DemandSeries({t: rng.randint(0, 6) for t in labels}),
        weights=weights,
        penalties=Penalties(p1=1.0, big_m=1e6, hire_cost=10.0),
    )
