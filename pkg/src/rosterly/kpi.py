"""Key performance indicators for a roster and deltas between solutions."""

from __future__ import annotations

from dataclasses import dataclass

from .encoder import _derive
from .model import Roster, RosterInstance

__all__ = ["KpiReport", "KpiDelta", "compute_kpis", "kpi_delta"]


@dataclass(frozen=True)
class KpiReport:
    nurse_count: int
    min_workload: float  # weighted, over nurses
    max_workload: float
    min_weekly_hours: float  # over nurse x week
    max_weekly_hours: float
    total_overtime_hours: float
    per_nurse_overtime: dict[str, float]
    total_slack_units: int
    objective: float


@dataclass(frozen=True)
class KpiDelta:
    """Field-wise after - before differences."""

    nurse_count: int
    min_workload: float
    max_workload: float
    min_weekly_hours: float
    max_weekly_hours: float
    total_overtime_hours: float
    total_slack_units: int
    objective: float


def compute_kpis(instance: RosterInstance, roster: Roster) -> KpiReport:
    hz = instance.horizon
    workloads = []
    weekly_hours = []
    per_nurse_ot: dict[str, float] = {}
    for n in instance.nurses:
        load = sum(
            instance.weights[(s.id, t)]
            for s in instance.shifts
            for t in hz.day_labels
            if roster.works(n.id, s.id, t)
        )
        workloads.append(load)
        ot = 0.0
        for k in range(1, hz.weeks + 1):
            hours = sum(
                s.duration_hours
                for t in hz.days_in_week(k)
                for s in instance.shifts
                if roster.works(n.id, s.id, t)
            )
            weekly_hours.append(hours)
            ot += max(0.0, hours - n.contract.h_std)
        per_nurse_ot[n.id] = ot

    _, z = _derive(instance, roster.x)
    pen = instance.penalties
    objective = (
        z
        + pen.p1 * sum(per_nurse_ot.values())
        + pen.big_m * sum(roster.j.values())
    )
    return KpiReport(
        nurse_count=len(instance.nurses),
        min_workload=min(workloads, default=0.0),
        max_workload=max(workloads, default=0.0),
        min_weekly_hours=min(weekly_hours, default=0.0),
        max_weekly_hours=max(weekly_hours, default=0.0),
        total_overtime_hours=sum(per_nurse_ot.values()),
        per_nurse_overtime=per_nurse_ot,
        total_slack_units=roster.total_slack(),
        objective=objective,
    )


def kpi_delta(before: KpiReport, after: KpiReport) -> KpiDelta:
    return KpiDelta(
        nurse_count=after.nurse_count - before.nurse_count,
        min_workload=after.min_workload - before.min_workload,
        max_workload=after.max_workload - before.max_workload,
        min_weekly_hours=after.min_weekly_hours - before.min_weekly_hours,
        max_weekly_hours=after.max_weekly_hours - before.max_weekly_hours,
        total_overtime_hours=after.total_overtime_hours
        - before.total_overtime_hours,
        total_slack_units=after.total_slack_units - before.total_slack_units,
        objective=after.objective - before.objective,
    )
