import math
import random

import numpy as np
import pytest

from conftest import REF_OBJECTIVE, build_reference_ward, random_guarded_instance
from rosterly.encoder import (
    DecodeError,
    check_roster,
    decode,
    encode,
    objective_of,
    roster_to_values,
)
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


def _bigger_ward():
    """2 nurses, day+night shifts, two 7-day weeks: the column/row counts
    below are worked out by hand from the constraint families."""
    shifts = (
        ShiftType("D", "Day", 8.0, 4, min_staff=1),
        ShiftType("N", "Night", 8.0, 4, is_night=True),
    )
    labels = tuple(f"d{t}" for t in range(14))
    hz = Horizon(weeks=2, day_labels=labels, days_per_week=7)
    contract = NurseContract(8.0, 40.0, 48.0)
    return RosterInstance(
        shifts=shifts,
        nurses=(Nurse("n1", "a", contract), Nurse("n2", "b", contract)),
        horizon=hz,
        demand=DemandSeries({t: 4 for t in labels}),
        weights=default_weights(shifts, hz),
        penalties=Penalties(1.0, 1e6, 10.0),
    )


def test_column_layout_and_counts():
    inst = _bigger_ward()
    model, index = encode(inst)
    # X: 2*2*14, J: 2*14, B: 2*2, Z: 1
    assert model.n_columns == 56 + 28 + 4 + 1 == 89
    keys = index.keys()
    assert all(k[0] == "X" for k in keys[:56])
    assert all(k[0] == "J" for k in keys[56:84])
    assert all(k[0] == "B" for k in keys[84:88])
    assert keys[88] == ("Z",)
    assert index.column_of(("Z",)) == 88
    assert index.key_of(0) == keys[0]


def test_constraint_family_counts():
    inst = _bigger_ward()
    model, _ = encode(inst)
    tags = [c.tag.split("[")[0] for c in model.constraints]
    by = {t: tags.count(t) for t in set(tags)}
    assert by["Eq1"] == 2 * 14       # nurse x day
    assert by["Eq2"] == 2 * 2        # nurse x week
    assert by["Eq3"] == 2 * 2
    assert by["Eq5"] == 2 * 13       # nurse x night x non-final day
    assert by["Eq7"] == 2 * 14       # shift x day
    assert by["MinStaff"] == 14      # only the floored day shift
    assert by["ZLink"] == 2
    assert by["BLink"] == 2 * 2
    assert len(model.constraints) == 110


def test_reference_ward_roundtrip_through_values(reference_ward):
    from rosterly.solver.brute import brute_force_solve

    roster = brute_force_solve(reference_ward)
    model, index = encode(reference_ward)
    values = roster_to_values(roster, index, reference_ward)
    back = decode(values, index, reference_ward)
    assert back.x == roster.x
    assert back.j == roster.j
    assert math.isclose(back.objective, REF_OBJECTIVE, abs_tol=1e-9)
    assert check_roster(reference_ward, back) == []


def test_decode_rejects_fractional_assignment(reference_ward):
    model, index = encode(reference_ward)
    values = np.zeros(len(index))
    values[0] = 0.5
    with pytest.raises(DecodeError):
        decode(values, index, reference_ward)


def test_decode_rejects_objective_mismatch(reference_ward):
    from rosterly.solver.brute import brute_force_solve

    roster = brute_force_solve(reference_ward)
    _, index = encode(reference_ward)
    values = roster_to_values(roster, index, reference_ward)
    values[index.column_of(("Z",))] += 7.0  # corrupt the peak-load column
    with pytest.raises(DecodeError):
        decode(values, index, reference_ward)


def test_check_roster_reports_violated_families(reference_ward):
    from rosterly.model import Roster

    # n1 works two shifts on d1 and a night followed by a d2 shift.
    bad = Roster(
        x=frozenset(
            {
                ("n1", "DAY", "d1"),
                ("n1", "NIGHT", "d1"),
                ("n1", "DAY", "d2"),
            }
        ),
        j={},
        beta={("n1", 1): 8.0},
        z=4.0,
        objective=12.0,
    )
    tags = check_roster(reference_ward, bad)
    families = {t.split("[")[0] for t in tags}
    assert "Eq1" in families       # two shifts same day
    assert "Eq5" in families       # worked after a night
    assert "Eq7" in families       # d1/d2 coverage unmet without slack
    assert "Eq3" in families       # 24h against h_max=16


def test_objective_of_matches_decode_on_random_instances():
    rng = random.Random(99)
    from rosterly.solver.brute import brute_force_solve

    checked = 0
    for _ in range(40):
        inst = random_guarded_instance(rng)
        roster = brute_force_solve(inst)
        if roster is None:
            continue
        assert math.isclose(
            objective_of(inst, roster), roster.objective, rel_tol=1e-9
        )
        _, index = encode(inst)
        back = decode(roster_to_values(roster, index, inst), index, inst)
        assert back.objective == pytest.approx(roster.objective)
        checked += 1
    assert checked >= 20
