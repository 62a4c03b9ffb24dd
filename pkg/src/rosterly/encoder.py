"""Lowering of a RosterInstance to a generic 0-1 MILP and back.

Column layout (dense, deterministic): all X(i,s,t) in nurse/shift/day
order, then J(s,t), then B(i,k), then Z. Constraint tags follow the
stable grammar ``Eq1[i,t] | Eq2[i,k] | Eq3[i,k] | Eq5[i,s,t] | Eq7[s,t]
| MinStaff[s,t] | ZLink[i] | BLink[i,k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Roster, RosterInstance, validate_instance

__all__ = [
    "Variable",
    "VarIndex",
    "LinearConstraint",
    "IlpModel",
    "EncodeError",
    "DecodeError",
    "encode",
    "decode",
    "objective_of",
    "roster_to_values",
    "check_roster",
]

INTEGRALITY_TOL = 1e-6

# Variable kinds
BINARY = "binary"
INTEGER = "integer"
CONTINUOUS = "continuous"


class EncodeError(ValueError):
    """Raised when an invalid instance is handed to the encoder."""


class DecodeError(ValueError):
    """Raised when a solver vector cannot be read back as a roster."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # binary | integer | continuous
    lower: float
    upper: float  # may be math.inf


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[int, float], ...]  # (column, coefficient), no dup columns
    sense: str  # "<=" | ">=" | "=="
    rhs: float
    tag: str


@dataclass(frozen=True)
class IlpModel:
    columns: tuple[Variable, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[tuple[int, float], ...]
    direction: str = "min"

    @property
    def n_columns(self) -> int:
        return len(self.columns)


class VarIndex:
    """Bijection between dense column indices and semantic keys.

    Keys: ("X", nurse, shift, day), ("J", shift, day), ("B", nurse, week),
    ("Z",).
    """

    def __init__(self, keys: list[tuple]):
        self._keys = list(keys)
        self._cols = {k: c for c, k in enumerate(keys)}

    def __len__(self) -> int:
        return len(self._keys)

    def column_of(self, key: tuple) -> int:
        return self._cols[key]

    def key_of(self, column: int) -> tuple:
        return self._keys[column]

    def keys(self) -> list[tuple]:
        return list(self._keys)


def encode(instance: RosterInstance) -> tuple[IlpModel, VarIndex]:
    """Build the full MILP for an instance.

    Rejects instances that fail structural validation.
    """
    report = validate_instance(instance)
    if not report.ok:
        msgs = "; ".join(e.message for e in report.errors)
        raise EncodeError(f"invalid instance: {msgs}")

    hz = instance.horizon
    days = hz.day_labels
    shifts = instance.shifts
    nurses = instance.nurses
    pen = instance.penalties

    keys: list[tuple] = []
    columns: list[Variable] = []
    for n in nurses:
        for s in shifts:
            for t in days:
                keys.append(("X", n.id, s.id, t))
                columns.append(Variable(f"x[{n.id},{s.id},{t}]", BINARY, 0.0, 1.0))
    for s in shifts:
        for t in days:
            keys.append(("J", s.id, t))
            columns.append(Variable(f"j[{s.id},{t}]", INTEGER, 0.0, math.inf))
    for n in nurses:
        for k in range(1, hz.weeks + 1):
            keys.append(("B", n.id, k))
            columns.append(
                Variable(
                    f"beta[{n.id},{k}]",
                    CONTINUOUS,
                    0.0,
                    n.contract.h_max - n.contract.h_std,
                )
            )
    keys.append(("Z",))
    columns.append(Variable("z", CONTINUOUS, 0.0, math.inf))

    index = VarIndex(keys)
    col = index.column_of
    cons: list[LinearConstraint] = []

    # At most one shift per nurse per day.
    for n in nurses:
        for t in days:
            terms = tuple((col(("X", n.id, s.id, t)), 1.0) for s in shifts)
            cons.append(LinearConstraint(terms, "<=", 1.0, f"Eq1[{n.id},{t}]"))

    # Weekly hour bounds.
    for n in nurses:
        for k in range(1, hz.weeks + 1):
            terms = tuple(
                (col(("X", n.id, s.id, t)), s.duration_hours)
                for t in hz.days_in_week(k)
                for s in shifts
            )
            cons.append(
                LinearConstraint(terms, ">=", n.contract.h_min, f"Eq2[{n.id},{k}]")
            )
            cons.append(
                LinearConstraint(terms, "<=", n.contract.h_max, f"Eq3[{n.id},{k}]")
            )

    # Night rest: a night shift blocks every shift the following day.
    for n in nurses:
        for s in shifts:
            if not s.is_night:
                continue
            for t in days[:-1]:
                succ = hz.successor(t)
                terms = [(col(("X", n.id, s2.id, succ)), 1.0) for s2 in shifts]
                terms.append((col(("X", n.id, s.id, t)), 1.0))
                cons.append(
                    LinearConstraint(
                        tuple(terms), "<=", 1.0, f"Eq5[{n.id},{s.id},{t}]"
                    )
                )

    # Capacity coverage with slack, plus optional fixed staffing floors.
    for s in shifts:
        a = float(s.capacity_per_nurse)
        for t in days:
            terms = [(col(("X", n.id, s.id, t)), a) for n in nurses]
            terms.append((col(("J", s.id, t)), a))
            cons.append(
                LinearConstraint(
                    tuple(terms), ">=", float(instance.demand[t]), f"Eq7[{s.id},{t}]"
                )
            )
            if s.min_staff > 0:
                terms = tuple((col(("X", n.id, s.id, t)), 1.0) for n in nurses)
                cons.append(
                    LinearConstraint(
                        terms, ">=", float(s.min_staff), f"MinStaff[{s.id},{t}]"
                    )
                )

    # Peak weighted workload: Z bounds every nurse's weighted load.
    zc = col(("Z",))
    for n in nurses:
        terms = [
            (col(("X", n.id, s.id, t)), instance.weights[(s.id, t)])
            for s in shifts
            for t in days
        ]
        terms.append((zc, -1.0))
        cons.append(LinearConstraint(tuple(terms), "<=", 0.0, f"ZLink[{n.id}]"))

    # Overtime: B(i,k) absorbs weekly hours above h_std.
    for n in nurses:
        for k in range(1, hz.weeks + 1):
            terms = [
                (col(("X", n.id, s.id, t)), s.duration_hours)
                for t in hz.days_in_week(k)
                for s in shifts
            ]
            terms.append((col(("B", n.id, k)), -1.0))
            cons.append(
                LinearConstraint(
                    tuple(terms), "<=", n.contract.h_std, f"BLink[{n.id},{k}]"
                )
            )

    objective: list[tuple[int, float]] = [(zc, 1.0)]
    for key in index.keys():
        if key[0] == "B":
            objective.append((index.column_of(key), pen.p1))
        elif key[0] == "J":
            objective.append((index.column_of(key), pen.big_m))
    objective.sort(key=lambda kv: kv[0])

    model = IlpModel(tuple(columns), tuple(cons), tuple(objective))
    return model, index


def _derive(instance: RosterInstance, x: frozenset[tuple[str, str, str]]):
    """Recompute (beta, z) from an assignment matrix."""
    hz = instance.horizon
    beta: dict[tuple[str, int], float] = {}
    z = 0.0
    for n in instance.nurses:
        load = 0.0
        for s in instance.shifts:
            for t in hz.day_labels:
                if (n.id, s.id, t) in x:
                    load += instance.weights[(s.id, t)]
        z = max(z, load)
        for k in range(1, hz.weeks + 1):
            hours = sum(
                s.duration_hours
                for t in hz.days_in_week(k)
                for s in instance.shifts
                if (n.id, s.id, t) in x
            )
            ot = hours - n.contract.h_std
            if ot > 1e-12:
                beta[(n.id, k)] = ot
    return beta, z


def decode(
    values: np.ndarray, index: VarIndex, instance: RosterInstance
) -> Roster:
    """Read a solver vector back into a Roster.

    Integer columns must be integral within 1e-6; beta and z are recomputed
    from x rather than copied, and the recomputed objective must agree with
    the vector's model objective within 1e-6 relative (anything else signals
    a solver bug).
    """
    pen = instance.penalties
    x = set()
    j: dict[tuple[str, str], int] = {}
    vec_beta = 0.0
    vec_z = 0.0
    vec_slack = 0.0
    for c, key in enumerate(index.keys()):
        v = float(values[c])
        if key[0] == "X":
            r = round(v)
            if abs(v - r) > INTEGRALITY_TOL or r not in (0, 1):
                raise DecodeError(f"non-integral assignment value {v} at {key}")
            if r == 1:
                x.add((key[1], key[2], key[3]))
        elif key[0] == "J":
            r = round(v)
            if abs(v - r) > INTEGRALITY_TOL or r < 0:
                raise DecodeError(f"non-integral slack value {v} at {key}")
            vec_slack += r
            if r > 0:
                j[(key[1], key[2])] = int(r)
        elif key[0] == "B":
            vec_beta += v
        else:
            vec_z = v

    xf = frozenset(x)
    beta, z = _derive(instance, xf)
    objective = z + pen.p1 * sum(beta.values()) + pen.big_m * sum(j.values())
    vector_obj = vec_z + pen.p1 * vec_beta + pen.big_m * vec_slack
    if abs(objective - vector_obj) > 1e-6 * max(1.0, abs(vector_obj)):
        raise DecodeError(
            f"recomputed objective {objective} disagrees with solver "
            f"objective {vector_obj}"
        )
    return Roster(x=xf, j=j, beta=beta, z=z, objective=objective)


def objective_of(instance: RosterInstance, roster: Roster) -> float:
    """Recompute z + p1*sum(beta) + M*sum(j) from first principles off the
    assignment matrix; independent cross-check of solver objectives."""
    beta, z = _derive(instance, roster.x)
    pen = instance.penalties
    return z + pen.p1 * sum(beta.values()) + pen.big_m * sum(roster.j.values())


def roster_to_values(
    roster: Roster, index: VarIndex, instance: RosterInstance
) -> np.ndarray:
    """Dense column vector for a roster (incumbent warm starts)."""
    beta, z = _derive(instance, roster.x)
    values = np.zeros(len(index))
    for c, key in enumerate(index.keys()):
        if key[0] == "X":
            values[c] = 1.0 if (key[1], key[2], key[3]) in roster.x else 0.0
        elif key[0] == "J":
            values[c] = roster.j.get((key[1], key[2]), 0)
        elif key[0] == "B":
            values[c] = beta.get((key[1], key[2]), 0.0)
        else:
            values[c] = z
    return values


def check_roster(
    instance: RosterInstance, roster: Roster, tol: float = 1e-9
) -> list[str]:
    """Walk every model constraint directly on the roster; returns the tags
    of violated constraints (empty list means the roster is feasible and
    its derived fields are consistent)."""
    hz = instance.horizon
    violations: list[str] = []

    for n in instance.nurses:
        for t in hz.day_labels:
            if sum(roster.works(n.id, s.id, t) for s in instance.shifts) > 1:
                violations.append(f"Eq1[{n.id},{t}]")

    for n in instance.nurses:
        for k in range(1, hz.weeks + 1):
            hours = sum(
                s.duration_hours
                for t in hz.days_in_week(k)
                for s in instance.shifts
                if roster.works(n.id, s.id, t)
            )
            if hours < n.contract.h_min - tol:
                violations.append(f"Eq2[{n.id},{k}]")
            if hours > n.contract.h_max + tol:
                violations.append(f"Eq3[{n.id},{k}]")

    for n in instance.nurses:
        for s in instance.shifts:
            if not s.is_night:
                continue
            for t in hz.day_labels[:-1]:
                if not roster.works(n.id, s.id, t):
                    continue
                succ = hz.successor(t)
                if any(roster.works(n.id, s2.id, succ) for s2 in instance.shifts):
                    violations.append(f"Eq5[{n.id},{s.id},{t}]")

    for s in instance.shifts:
        for t in hz.day_labels:
            staffed = sum(roster.works(n.id, s.id, t) for n in instance.nurses)
            covered = s.capacity_per_nurse * (staffed + roster.slack(s.id, t))
            if covered < instance.demand[t]:
                violations.append(f"Eq7[{s.id},{t}]")
            if s.min_staff > 0 and staffed < s.min_staff:
                violations.append(f"MinStaff[{s.id},{t}]")

    beta, z = _derive(instance, roster.x)
    if abs(z - roster.z) > 1e-6:
        violations.append("ZConsistency")
    keys = set(beta) | set(roster.beta)
    if any(
        abs(beta.get(k, 0.0) - roster.beta.get(k, 0.0)) > 1e-6 for k in keys
    ):
        violations.append("BetaConsistency")
    if abs(objective_of(instance, roster) - roster.objective) > 1e-6 * max(
        1.0, abs(roster.objective)
    ):
        violations.append("Objective")

    return violations
