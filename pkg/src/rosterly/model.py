"""Core domain types for the nurse rostering problem.

All types are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

__all__ = [
    "ShiftType",
    "Horizon",
    "NurseContract",
    "Nurse",
    "DemandSeries",
    "WeightTable",
    "Penalties",
    "RosterInstance",
    "Roster",
    "ValidationIssue",
    "ValidationReport",
    "validate_instance",
    "default_weights",
    "with_additional_nurse",
    "modal_contract",
]

DEFAULT_BIG_M = 1e6


@dataclass(frozen=True)
class ShiftType:
    """A shift: work block with a duration, per-nurse patient capacity and
    an optional night flag triggering the mandatory-rest rule."""

    id: str
    name: str
    duration_hours: float
    capacity_per_nurse: int
    min_staff: int = 0
    is_night: bool = False


@dataclass(frozen=True)
class Horizon:
    """Ordered planning days partitioned into equal consecutive weeks."""

    weeks: int
    day_labels: tuple[str, ...]
    days_per_week: int = 7

    def __post_init__(self):
        expected = self.weeks * self.days_per_week
        if len(self.day_labels) != expected:
            raise ValueError(
                f"horizon needs {expected} day labels, got {len(self.day_labels)}"
            )

    @property
    def days(self) -> tuple[str, ...]:
        return self.day_labels

    def week_of(self, day: str) -> int:
        """Week index (1-based) containing `day`."""
        return self.day_labels.index(day) // self.days_per_week + 1

    def days_in_week(self, week: int) -> tuple[str, ...]:
        lo = (week - 1) * self.days_per_week
        return self.day_labels[lo : lo + self.days_per_week]

    def successor(self, day: str) -> str | None:
        """The next day label, or None for the final day."""
        pos = self.day_labels.index(day)
        if pos + 1 >= len(self.day_labels):
            return None
        return self.day_labels[pos + 1]

    def is_weekend(self, day: str) -> bool:
        # Last 2 day-positions of each 7-day week count as weekend;
        # non-7-day horizons have no weekend.
        if self.days_per_week != 7:
            return False
        return self.day_labels.index(day) % 7 >= 5


@dataclass(frozen=True)
class NurseContract:
    """Weekly-hour bounds; overtime accrues above h_std up to h_max."""

    h_min: float
    h_std: float
    h_max: float


@dataclass(frozen=True)
class Nurse:
    id: str
    name: str
    contract: NurseContract


@dataclass(frozen=True)
class DemandSeries:
    """Daily patient counts, keyed by day label."""

    demand: dict[str, int]

    def __getitem__(self, day: str) -> int:
        return self.demand[day]


@dataclass(frozen=True)
class WeightTable:
    """Shift heaviness weights, keyed by (shift id, day label)."""

    w: dict[tuple[str, str], float]

    def __getitem__(self, key: tuple[str, str]) -> float:
        return self.w[key]


@dataclass(frozen=True)
class Penalties:
    """Objective coefficients: overtime weight, understaffing big-M, hire cost."""

    p1: float
    big_m: float = DEFAULT_BIG_M
    hire_cost: float = 0.0


@dataclass(frozen=True)
class RosterInstance:
    shifts: tuple[ShiftType, ...]
    nurses: tuple[Nurse, ...]
    horizon: Horizon
    demand: DemandSeries
    weights: WeightTable
    penalties: Penalties

    def shift(self, shift_id: str) -> ShiftType:
        for s in self.shifts:
            if s.id == shift_id:
                return s
        raise KeyError(shift_id)

    def nurse(self, nurse_id: str) -> Nurse:
        for n in self.nurses:
            if n.id == nurse_id:
                return n
        raise KeyError(nurse_id)


@dataclass(frozen=True)
class Roster:
    """A solution: binary assignment, understaffing slack, and derived
    overtime/peak-workload figures.

    `x` holds only the assigned (nurse, shift, day) triples; `j` and `beta`
    hold only their strictly positive entries, so equal solutions compare
    equal regardless of how they were produced.
    """

    x: frozenset[tuple[str, str, str]]
    j: dict[tuple[str, str], int]
    beta: dict[tuple[str, int], float]
    z: float
    objective: float

    def works(self, nurse_id: str, shift_id: str, day: str) -> bool:
        return (nurse_id, shift_id, day) in self.x

    def slack(self, shift_id: str, day: str) -> int:
        return self.j.get((shift_id, day), 0)

    def total_slack(self) -> int:
        return sum(self.j.values())

    def assignments_of(self, nurse_id: str) -> list[tuple[str, str]]:
        """(shift id, day) pairs worked by the nurse, in x's sorted order."""
        return sorted((s, t) for (i, s, t) in self.x if i == nurse_id)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...]
    warnings: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_instance(instance: RosterInstance) -> ValidationReport:
    """Structural validation. Never raises; returns all findings at once."""
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    def err(code, msg):
        errors.append(ValidationIssue(code, msg))

    def warn(code, msg):
        warnings.append(ValidationIssue(code, msg))

    if not instance.shifts:
        err("no-shifts", "instance has no shift types")
    if not instance.nurses:
        err("no-nurses", "instance has no nurses")

    seen = set()
    for s in instance.shifts:
        if s.id in seen:
            err("duplicate-shift-id", f"duplicate shift id {s.id!r}")
        seen.add(s.id)
        if s.duration_hours <= 0:
            err("bad-duration", f"shift {s.id!r} has nonpositive duration")
        if s.capacity_per_nurse < 1:
            err("bad-capacity", f"shift {s.id!r} has capacity_per_nurse < 1")
        if s.min_staff < 0:
            err("bad-min-staff", f"shift {s.id!r} has negative min_staff")

    seen = set()
    for n in instance.nurses:
        if n.id in seen:
            err("duplicate-nurse-id", f"duplicate nurse id {n.id!r}")
        seen.add(n.id)
        c = n.contract
        if not (0 <= c.h_min <= c.h_std <= c.h_max):
            err(
                "contract-bounds-inverted",
                f"nurse {n.id!r}: contract bounds inverted, "
                f"need 0 <= h_min <= h_std <= h_max, got "
                f"({c.h_min}, {c.h_std}, {c.h_max})",
            )

    hz = instance.horizon
    if len(set(hz.day_labels)) != len(hz.day_labels):
        err("duplicate-day-label", "horizon day labels are not distinct")

    days = set(hz.day_labels)
    demand_days = set(instance.demand.demand)
    if demand_days != days:
        err(
            "demand-horizon-mismatch",
            f"demand/horizon mismatch: demand covers {len(demand_days)} days, "
            f"horizon has {len(days)}",
        )
    for day, patients in instance.demand.demand.items():
        if patients < 0:
            err("negative-demand", f"negative demand on {day!r}")

    expected_keys = {(s.id, t) for s in instance.shifts for t in hz.day_labels}
    if set(instance.weights.w) != expected_keys:
        err(
            "weights-horizon-mismatch",
            "weight table does not cover exactly every (shift, day) pair",
        )
    for key, w in instance.weights.w.items():
        if w <= 0:
            err("bad-weight", f"weight for {key} is not positive")

    pen = instance.penalties
    if pen.p1 < 0:
        err("bad-p1", "p1 must be non-negative")
    if pen.hire_cost < 0:
        err("bad-hire-cost", "hire_cost must be non-negative")
    if pen.big_m <= 0:
        err("bad-big-m", "big_m must be positive")
    else:
        max_w = max(instance.weights.w.values(), default=0.0)
        if pen.big_m <= pen.p1 or pen.big_m <= max_w:
            err(
                "big-m-dominance",
                f"big_m={pen.big_m} must exceed p1={pen.p1} and every weight "
                f"(max {max_w})",
            )
        elif instance.nurses and instance.shifts:
            # Sufficient dominance: M must beat the largest possible
            # non-slack objective, otherwise slack may leak into optima
            # even when coverage is achievable.
            q = hz.weeks
            n = len(instance.nurses)
            ot_span = max(
                (nu.contract.h_max - nu.contract.h_std for nu in instance.nurses),
                default=0.0,
            )
            day_max = sum(
                max(instance.weights.w[(s.id, t)] for s in instance.shifts)
                for t in hz.day_labels
            )
            if pen.big_m <= pen.p1 * ot_span * q * n + day_max:
                warn(
                    "big-m-weak",
                    "big_m may not dominate all non-slack objective terms; "
                    "slack could appear in optima even when avoidable",
                )

    if instance.shifts:
        max_dur = max(s.duration_hours for s in instance.shifts)
        for n in instance.nurses:
            if n.contract.h_min > hz.days_per_week * max_dur:
                warn(
                    "h-min-unreachable",
                    f"nurse {n.id!r}: h_min={n.contract.h_min} exceeds "
                    f"{hz.days_per_week} days x longest shift {max_dur}h",
                )

    if instance.demand.demand and all(
        v == 0 for v in instance.demand.demand.values()
    ):
        warn("zero-demand", "demand is zero on every day of the horizon")

    return ValidationReport(tuple(errors), tuple(warnings))


def default_weights(shifts: tuple[ShiftType, ...], horizon: Horizon) -> WeightTable:
    """Default heaviness table: nights heavier than day shifts, weekends
    heavier than midweek, weekend nights heaviest.

    Values: day/weekday 1, day/weekend 1.5, night/weekday 2, night/weekend 3.
    """
    w: dict[tuple[str, str], float] = {}
    for s in shifts:
        for t in horizon.day_labels:
            weekend = horizon.is_weekend(t)
            if s.is_night:
                w[(s.id, t)] = 3.0 if weekend else 2.0
            else:
                w[(s.id, t)] = 1.5 if weekend else 1.0
    return WeightTable(w)


def with_additional_nurse(
    instance: RosterInstance, template: NurseContract
) -> RosterInstance:
    """A copy of the instance with one fresh nurse carrying `template`.

    The generated id never collides with existing ids; the input instance
    is left untouched.
    """
    existing = {n.id for n in instance.nurses}
    for k in itertools.count(1):
        new_id = f"hire{k}"
        if new_id not in existing:
            break
    nurse = Nurse(id=new_id, name=f"Hire {new_id[4:]}", contract=template)
    return replace(instance, nurses=instance.nurses + (nurse,))


def modal_contract(instance: RosterInstance) -> NurseContract:
    """The most common contract among the instance's nurses (ties broken by
    first appearance); default template for hiring candidates."""
    counts: dict[NurseContract, int] = {}
    order: list[NurseContract] = []
    for n in instance.nurses:
        if n.contract not in counts:
            order.append(n.contract)
        counts[n.contract] = counts.get(n.contract, 0) + 1
    return max(order, key=lambda c: counts[c])
