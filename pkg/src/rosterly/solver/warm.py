"""Greedy construction of a feasible roster, used as the incumbent that
lets branch-and-bound prune from the first node."""

from __future__ import annotations

import math

from ..encoder import _derive
from ..model import Roster, RosterInstance

__all__ = ["warm_start"]


def warm_start(instance: RosterInstance) -> Roster | None:
    """Feasible roster built greedily, or None when the h_min top-up fails
    (the validator's unreachable-minimum warning case).

    Coverage is attempted day by day, shift by shift, preferring nurses
    with the least accumulated weighted workload; shortfall goes to slack,
    then nurses still below their weekly minimum pick up the cheapest
    remaining shifts.
    """
    hz = instance.horizon
    days = hz.day_labels
    x: set[tuple[str, str, str]] = set()

    def hours_in_week(nid: str, week: int) -> float:
        return sum(
            s.duration_hours
            for t in hz.days_in_week(week)
            for s in instance.shifts
            if (nid, s.id, t) in x
        )

    def workload(nid: str) -> float:
        return sum(
            instance.weights[(s, t)] for (i, s, t) in x if i == nid
        )

    def free_on(nid: str, day: str) -> bool:
        return not any((nid, s.id, day) in x for s in instance.shifts)

    def night_before(nid: str, day: str) -> bool:
        pos = days.index(day)
        if pos == 0:
            return False
        prev = days[pos - 1]
        return any(
            s.is_night and (nid, s.id, prev) in x for s in instance.shifts
        )

    def night_blocks_successor(nid: str, shift, day: str) -> bool:
        if not shift.is_night:
            return False
        succ = hz.successor(day)
        return succ is not None and not free_on(nid, succ)

    def can_assign(nid: str, shift, day: str) -> bool:
        if not free_on(nid, day):
            return False
        if night_before(nid, day):
            return False
        if night_blocks_successor(nid, shift, day):
            return False
        week = hz.week_of(day)
        contract = instance.nurse(nid).contract
        return hours_in_week(nid, week) + shift.duration_hours <= contract.h_max + 1e-9

    # Coverage pass.
    for day in days:
        for shift in instance.shifts:
            need = max(
                math.ceil(instance.demand[day] / shift.capacity_per_nurse),
                shift.min_staff,
            )
            staffed = 0
            while staffed < need:
                candidates = [
                    n.id
                    for n in instance.nurses
                    if can_assign(n.id, shift, day)
                ]
                if not candidates:
                    break
                pick = min(
                    candidates,
                    key=lambda nid: (workload(nid), nid),
                )
                x.add((pick, shift.id, day))
                staffed += 1

    # Top-up pass: meet every nurse's weekly minimum.
    for n in instance.nurses:
        for week in range(1, hz.weeks + 1):
            while hours_in_week(n.id, week) < n.contract.h_min - 1e-9:
                options = [
                    (instance.weights[(s.id, t)], t, s)
                    for t in hz.days_in_week(week)
                    for s in instance.shifts
                    if can_assign(n.id, s, t)
                ]
                if not options:
                    return None
                _, t, s = min(options, key=lambda o: (o[0], o[1], o[2].id))
                x.add((n.id, s.id, t))

    # Min-staff floors are hard; if coverage couldn't meet one, fail.
    for s in instance.shifts:
        if s.min_staff <= 0:
            continue
        for t in days:
            if sum((n.id, s.id, t) in x for n in instance.nurses) < s.min_staff:
                return None

    j: dict[tuple[str, str], int] = {}
    for s in instance.shifts:
        a = s.capacity_per_nurse
        for t in days:
            staffed = sum((n.id, s.id, t) in x for n in instance.nurses)
            short = instance.demand[t] - a * staffed
            if short > 0:
                j[(s.id, t)] = math.ceil(short / a)

    xf = frozenset(x)
    beta, z = _derive(instance, xf)
    pen = instance.penalties
    obj = z + pen.p1 * sum(beta.values()) + pen.big_m * sum(j.values())
    return Roster(x=xf, j=j, beta=beta, z=z, objective=obj)
