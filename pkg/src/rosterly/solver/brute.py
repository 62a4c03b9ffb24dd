"""Exhaustive assignment enumeration: the test oracle.

Enumerates every 0/1 assignment matrix (guarded to at most 2^16), keeps
those satisfying the one-shift-per-day, weekly-hour and night-rest rules,
derives the minimal slack per coverage cell, and returns the roster with
the smallest objective. Ties resolve to the lexicographically smallest
assignment bit-string, which the enumeration order provides for free.
"""

from __future__ import annotations

import math

from ..encoder import _derive
from ..model import Roster, RosterInstance

__all__ = ["brute_force_solve", "BRUTE_FORCE_BIT_LIMIT"]

BRUTE_FORCE_BIT_LIMIT = 16


def brute_force_solve(instance: RosterInstance) -> Roster | None:
    """Optimal roster by enumeration, or None when no assignment satisfies
    the hard constraints. Raises ValueError past the enumeration guard."""
    hz = instance.horizon
    days = hz.day_labels
    cells = [
        (n.id, s.id, t)
        for n in instance.nurses
        for s in instance.shifts
        for t in days
    ]
    nbits = len(cells)
    if nbits > BRUTE_FORCE_BIT_LIMIT:
        raise ValueError(
            f"instance has {nbits} assignment cells, enumeration guard is "
            f"{BRUTE_FORCE_BIT_LIMIT}"
        )

    pen = instance.penalties
    best: Roster | None = None
    for mask in range(1 << nbits):
        # Bit 0 is the first cell so increasing mask order scans
        # lexicographically by reversed string; recover true lexicographic
        # order by treating the first cell as the most significant bit.
        x = frozenset(
            cells[idx]
            for idx in range(nbits)
            if mask >> (nbits - 1 - idx) & 1
        )
        if not _feasible(instance, x):
            continue
        j: dict[tuple[str, str], int] = {}
        for s in instance.shifts:
            a = s.capacity_per_nurse
            for t in days:
                staffed = sum((n.id, s.id, t) in x for n in instance.nurses)
                short = instance.demand[t] - a * staffed
                if short > 0:
                    j[(s.id, t)] = math.ceil(short / a)
        beta, z = _derive(instance, x)
        obj = z + pen.p1 * sum(beta.values()) + pen.big_m * sum(j.values())
        if best is None or obj < best.objective - 1e-12:
            best = Roster(x=x, j=j, beta=beta, z=z, objective=obj)
    return best


def _feasible(instance: RosterInstance, x: frozenset) -> bool:
    hz = instance.horizon
    for n in instance.nurses:
        for t in hz.day_labels:
            if sum((n.id, s.id, t) in x for s in instance.shifts) > 1:
                return False
        for k in range(1, hz.weeks + 1):
            hours = sum(
                s.duration_hours
                for t in hz.days_in_week(k)
                for s in instance.shifts
                if (n.id, s.id, t) in x
            )
            if not (
                n.contract.h_min - 1e-9 <= hours <= n.contract.h_max + 1e-9
            ):
                return False
        for s in instance.shifts:
            if not s.is_night:
                continue
            for t in hz.day_labels[:-1]:
                if (n.id, s.id, t) not in x:
                    continue
                succ = hz.successor(t)
                if any((n.id, s2.id, succ) in x for s2 in instance.shifts):
                    return False
    # Fixed staffing floors are hard constraints (no slack there).
    for s in instance.shifts:
        if s.min_staff <= 0:
            continue
        for t in hz.day_labels:
            if sum((n.id, s.id, t) in x for n in instance.nurses) < s.min_staff:
                return False
    return True
