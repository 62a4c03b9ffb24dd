"""rosterly: nurse rostering as a 0-1 MILP with a built-in exact solver,
understaffing detection, an iterative hiring planner and KPI reporting."""

from .model import (  # noqa: F401
    DemandSeries,
    Horizon,
    Nurse,
    NurseContract,
    Penalties,
    Roster,
    RosterInstance,
    ShiftType,
    ValidationReport,
    WeightTable,
    default_weights,
    modal_contract,
    validate_instance,
    with_additional_nurse,
)

__version__ = "0.1.0"
