"""Understaffing detection and the iterative hiring loop.

Each candidate hire clones the instance with one extra nurse; the hire is
accepted while the re-solved objective improves by strictly more than the
hire cost c, the improvement-vs-cost trade the planner exposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kpi import KpiReport, compute_kpis
from .model import (
    NurseContract,
    Roster,
    RosterInstance,
    modal_contract,
    with_additional_nurse,
)
from .solver import SolveOptions, solve_instance

__all__ = [
    "UnderstaffingEntry",
    "UnderstaffingReport",
    "HiringOptions",
    "HiringIteration",
    "HiringPlan",
    "detect_understaffing",
    "plan_hiring",
]

STOP_IMPROVEMENT = "improvement-below-c"
STOP_MAX_HIRES = "max-hires"
STOP_SOLVER_LIMIT = "solver-limit"


@dataclass(frozen=True)
class UnderstaffingEntry:
    shift_id: str
    day: str
    slack_units: int
    shortfall_patients: int  # max(0, D_t - a_s * staffed)


@dataclass(frozen=True)
class UnderstaffingReport:
    entries: tuple[UnderstaffingEntry, ...]
    total_slack: int


@dataclass(frozen=True)
class HiringOptions:
    template: NurseContract | None = None  # None: instance's modal contract
    max_hires: int = 50
    solve_options: SolveOptions = field(default_factory=SolveOptions)


@dataclass(frozen=True)
class HiringIteration:
    nurse_count: int
    objective: float
    total_slack: int
    kpis: KpiReport


@dataclass(frozen=True)
class HiringPlan:
    iterations: tuple[HiringIteration, ...]
    hires_accepted: int
    final_roster: Roster | None
    final_instance: RosterInstance
    stop_reason: str


def detect_understaffing(
    instance: RosterInstance, roster: Roster
) -> UnderstaffingReport:
    """Every (shift, day) cell with positive slack, with the exact patient
    shortfall behind it."""
    entries = []
    for s in instance.shifts:
        for t in instance.horizon.day_labels:
            units = roster.slack(s.id, t)
            if units <= 0:
                continue
            staffed = sum(
                roster.works(n.id, s.id, t) for n in instance.nurses
            )
            shortfall = max(
                0, instance.demand[t] - s.capacity_per_nurse * staffed
            )
            entries.append(
                UnderstaffingEntry(s.id, t, units, shortfall)
            )
    return UnderstaffingReport(tuple(entries), sum(e.slack_units for e in entries))


def plan_hiring(
    instance: RosterInstance, opts: HiringOptions = HiringOptions()
) -> HiringPlan:
    """Iterative hiring: keep adding a template nurse while the re-solved
    objective improves by strictly more than the hire cost."""
    template = opts.template or modal_contract(instance)
    c = instance.penalties.hire_cost

    current = instance
    roster, result = solve_instance(current, opts.solve_options)
    iterations: list[HiringIteration] = []
    if roster is None or result.status not in ("optimal", "feasible"):
        return HiringPlan((), 0, None, current, STOP_SOLVER_LIMIT)
    iterations.append(_iteration(current, roster))

    stop = STOP_IMPROVEMENT
    while True:
        if len(iterations) - 1 >= opts.max_hires:
            stop = STOP_MAX_HIRES
            break
        candidate = with_additional_nurse(current, template)
        cand_roster, cand_result = solve_instance(candidate, opts.solve_options)
        if cand_roster is None or cand_result.status not in ("optimal", "feasible"):
            stop = STOP_SOLVER_LIMIT
            break
        if cand_roster.objective + c < roster.objective:
            current, roster = candidate, cand_roster
            iterations.append(_iteration(current, roster))
            continue
        stop = STOP_IMPROVEMENT
        break

    return HiringPlan(
        iterations=tuple(iterations),
        hires_accepted=len(iterations) - 1,
        final_roster=roster,
        final_instance=current,
        stop_reason=stop,
    )


def _iteration(instance: RosterInstance, roster: Roster) -> HiringIteration:
    return HiringIteration(
        nurse_count=len(instance.nurses),
        objective=roster.objective,
        total_slack=roster.total_slack(),
        kpis=compute_kpis(instance, roster),
    )
