"""File ingestion and export.

Instances live in three comma-separated tables (nurses, shifts, demand)
plus one JSON config; day order is the demand table's row order. Rosters,
KPI reports and hiring plans export as canonical JSON (sorted keys, fixed
separators) so identical inputs always produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from .kpi import KpiDelta, KpiReport
from .model import (
    DEFAULT_BIG_M,
    DemandSeries,
    Horizon,
    Nurse,
    NurseContract,
    Penalties,
    Roster,
    RosterInstance,
    ShiftType,
    WeightTable,
    default_weights,
    validate_instance,
)
from .planner import HiringPlan, UnderstaffingReport

__all__ = [
    "InstanceFileSet",
    "LoadIssue",
    "InstanceLoadError",
    "load_instance",
    "export_instance",
    "instance_fingerprint",
    "instance_to_payload",
    "payload_to_instance",
    "export_roster",
    "import_roster",
    "roster_to_document",
    "export_nurse_sheets",
    "export_kpis",
    "kpi_report_to_dict",
    "kpi_delta_to_dict",
    "hiring_plan_to_dict",
    "understaffing_to_dict",
]

REST = "REST"
POST_NIGHT_REST = "POST-NIGHT-REST"

NURSE_COLUMNS = ["id", "name", "h_min", "h_std", "h_max"]
SHIFT_COLUMNS = [
    "id",
    "name",
    "duration_hours",
    "capacity_per_nurse",
    "min_staff",
    "is_night",
]
DEMAND_COLUMNS = ["day_label", "patients"]


@dataclass(frozen=True)
class InstanceFileSet:
    nurses: Path
    shifts: Path
    demand: Path
    config: Path


@dataclass(frozen=True)
class LoadIssue:
    file: str
    line: int | None  # 1-based data row; None for file-level problems
    field: str | None
    message: str


class InstanceLoadError(ValueError):
    def __init__(self, issues: list[LoadIssue]):
        self.issues = issues
        lines = "; ".join(
            f"{i.file}"
            + (f":{i.line}" if i.line is not None else "")
            + (f" [{i.field}]" if i.field else "")
            + f": {i.message}"
            for i in issues
        )
        super().__init__(lines)


class _Collector:
    def __init__(self):
        self.issues: list[LoadIssue] = []

    def add(self, file, line, field, message):
        self.issues.append(LoadIssue(file, line, field, message))

    def raise_if_any(self):
        if self.issues:
            raise InstanceLoadError(self.issues)


def _read_table(path: Path, required: list[str], errs: _Collector, name: str):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in required if c not in header]
            if missing:
                errs.add(name, None, None, f"missing columns: {', '.join(missing)}")
                return []
            extra = [c for c in header if c not in required]
            if extra:
                # Decorative columns are tolerated, not ingested.
                pass
            return [dict(row) for row in reader]
    except OSError as exc:
        errs.add(name, None, None, f"cannot read: {exc}")
        return []


def _num(row, field, errs, name, line, kind=float, minimum=None):
    raw = (row.get(field) or "").strip()
    try:
        value = kind(raw)
    except (TypeError, ValueError):
        errs.add(name, line, field, f"non-numeric value {raw!r}")
        return None
    if minimum is not None and value < minimum:
        errs.add(name, line, field, f"value {value} below minimum {minimum}")
        return None
    return value


def _bool(row, field, errs, name, line):
    raw = (row.get(field) or "").strip().lower()
    if raw in ("1", "true", "yes"):
        return True
    if raw in ("0", "false", "no", ""):
        return False
    errs.add(name, line, field, f"not a boolean: {raw!r}")
    return None


def _build_instance(
    nurse_rows, shift_rows, demand_rows, config, errs: _Collector
) -> RosterInstance:
    shifts = []
    for i, row in enumerate(shift_rows, start=1):
        sid = (row.get("id") or "").strip()
        if not sid:
            errs.add("shifts", i, "id", "empty shift id")
            continue
        dur = _num(row, "duration_hours", errs, "shifts", i)
        cap = _num(row, "capacity_per_nurse", errs, "shifts", i, kind=int)
        floor = (row.get("min_staff") or "").strip()
        min_staff = (
            _num(row, "min_staff", errs, "shifts", i, kind=int) if floor else 0
        )
        night = _bool(row, "is_night", errs, "shifts", i)
        if None in (dur, cap, min_staff, night):
            continue
        shifts.append(
            ShiftType(
                sid, (row.get("name") or sid).strip(), dur, cap, min_staff, night
            )
        )

    nurses = []
    for i, row in enumerate(nurse_rows, start=1):
        nid = (row.get("id") or "").strip()
        if not nid:
            errs.add("nurses", i, "id", "empty nurse id")
            continue
        h_min = _num(row, "h_min", errs, "nurses", i)
        h_std = _num(row, "h_std", errs, "nurses", i)
        h_max = _num(row, "h_max", errs, "nurses", i)
        if None in (h_min, h_std, h_max):
            continue
        nurses.append(
            Nurse(nid, (row.get("name") or nid).strip(),
                  NurseContract(h_min, h_std, h_max))
        )

    demand = {}
    labels = []
    for i, row in enumerate(demand_rows, start=1):
        day = (row.get("day_label") or "").strip()
        if not day:
            errs.add("demand", i, "day_label", "empty day label")
            continue
        patients = _num(row, "patients", errs, "demand", i, kind=int, minimum=0)
        if patients is None:
            continue
        if day in demand:
            errs.add("demand", i, "day_label", f"duplicate day label {day!r}")
            continue
        labels.append(day)
        demand[day] = patients

    weeks = config.get("weeks")
    days_per_week = config.get("days_per_week", 7)
    if not isinstance(weeks, int) or weeks < 1:
        errs.add("config", None, "weeks", "missing or non-positive 'weeks'")
        weeks = max(1, len(labels))
        days_per_week = max(1, len(labels)) // weeks
    if not isinstance(days_per_week, int) or days_per_week < 1:
        errs.add("config", None, "days_per_week", "non-positive 'days_per_week'")
        days_per_week = 7
    if weeks * days_per_week != len(labels):
        errs.add(
            "demand",
            None,
            None,
            f"demand/horizon mismatch: {len(labels)} day rows vs "
            f"{weeks} weeks x {days_per_week} days",
        )
    errs.raise_if_any()

    horizon = Horizon(
        weeks=weeks, day_labels=tuple(labels), days_per_week=days_per_week
    )

    weights = default_weights(tuple(shifts), horizon)
    w = dict(weights.w)
    for i, entry in enumerate(config.get("weights", []), start=1):
        sid = entry.get("shift")
        day = entry.get("day")
        value = entry.get("weight")
        if (sid, day) not in w:
            errs.add("config", i, "weights", f"unknown (shift, day) ({sid}, {day})")
            continue
        if not isinstance(value, (int, float)) or value <= 0:
            errs.add("config", i, "weights", f"weight must be positive, got {value!r}")
            continue
        w[(sid, day)] = float(value)

    p1 = config.get("p1", 0.0)
    big_m = config.get("big_m", DEFAULT_BIG_M)
    hire_cost = config.get("hire_cost", 0.0)
    for key, value in (("p1", p1), ("big_m", big_m), ("hire_cost", hire_cost)):
        if not isinstance(value, (int, float)):
            errs.add("config", None, key, f"non-numeric value {value!r}")
    errs.raise_if_any()

    instance = RosterInstance(
        shifts=tuple(shifts),
        nurses=tuple(nurses),
        horizon=horizon,
        demand=DemandSeries(demand),
        weights=WeightTable(w),
        penalties=Penalties(p1=float(p1), big_m=float(big_m),
                            hire_cost=float(hire_cost)),
    )
    report = validate_instance(instance)
    for err in report.errors:
        errs.add("instance", None, err.code, err.message)
    errs.raise_if_any()
    return instance


def load_instance(files: InstanceFileSet) -> RosterInstance:
    """Parse and validate an instance from its file set; raises
    InstanceLoadError carrying every located problem at once."""
    errs = _Collector()
    nurse_rows = _read_table(Path(files.nurses), NURSE_COLUMNS, errs, "nurses")
    shift_rows = _read_table(Path(files.shifts), SHIFT_COLUMNS, errs, "shifts")
    demand_rows = _read_table(Path(files.demand), DEMAND_COLUMNS, errs, "demand")
    config = {}
    try:
        with open(files.config, encoding="utf-8") as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            errs.add("config", None, None, "config must be a JSON object")
            config = {}
    except OSError as exc:
        errs.add("config", None, None, f"cannot read: {exc}")
    except json.JSONDecodeError as exc:
        errs.add("config", exc.lineno, None, f"invalid JSON: {exc.msg}")
    errs.raise_if_any()
    return _build_instance(nurse_rows, shift_rows, demand_rows, config, errs)


def payload_to_instance(payload: dict) -> RosterInstance:
    """Instance from a JSON payload mirroring the file set:
    {nurses: [...], shifts: [...], demand: [...], config: {...}}."""
    errs = _Collector()
    if not isinstance(payload, dict):
        errs.add("payload", None, None, "payload must be a JSON object")
        errs.raise_if_any()
    rows = {}
    for section, columns in (
        ("nurses", NURSE_COLUMNS),
        ("shifts", SHIFT_COLUMNS),
        ("demand", DEMAND_COLUMNS),
    ):
        raw = payload.get(section)
        if not isinstance(raw, list):
            errs.add(section, None, None, f"missing or non-list section {section!r}")
            rows[section] = []
            continue
        rows[section] = [
            {k: "" if v is None else str(v) for k, v in entry.items()}
            if isinstance(entry, dict)
            else {}
            for entry in raw
        ]
    config = payload.get("config", {})
    if not isinstance(config, dict):
        errs.add("config", None, None, "config must be an object")
        config = {}
    errs.raise_if_any()
    return _build_instance(
        rows["nurses"], rows["shifts"], rows["demand"], config, errs
    )


def instance_to_payload(instance: RosterInstance) -> dict:
    """Canonical JSON-serializable form; inverse of payload_to_instance
    and the basis of the instance fingerprint."""
    hz = instance.horizon
    return {
        "nurses": [
            {
                "id": n.id,
                "name": n.name,
                "h_min": n.contract.h_min,
                "h_std": n.contract.h_std,
                "h_max": n.contract.h_max,
            }
            for n in instance.nurses
        ],
        "shifts": [
            {
                "id": s.id,
                "name": s.name,
                "duration_hours": s.duration_hours,
                "capacity_per_nurse": s.capacity_per_nurse,
                "min_staff": s.min_staff,
                "is_night": s.is_night,
            }
            for s in instance.shifts
        ],
        "demand": [
            {"day_label": t, "patients": instance.demand[t]}
            for t in hz.day_labels
        ],
        "config": {
            "weeks": hz.weeks,
            "days_per_week": hz.days_per_week,
            "p1": instance.penalties.p1,
            "big_m": instance.penalties.big_m,
            "hire_cost": instance.penalties.hire_cost,
            "weights": [
                {"shift": s.id, "day": t, "weight": instance.weights[(s.id, t)]}
                for s in instance.shifts
                for t in hz.day_labels
            ],
        },
    }


def instance_fingerprint(instance: RosterInstance) -> str:
    """Hex digest of the canonical serialized instance."""
    blob = _dumps(instance_to_payload(instance))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def export_instance(instance: RosterInstance, directory: Path) -> InstanceFileSet:
    """Write the instance back out as its four-file set."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    payload = instance_to_payload(instance)
    files = InstanceFileSet(
        nurses=directory / "nurses.csv",
        shifts=directory / "shifts.csv",
        demand=directory / "demand.csv",
        config=directory / "config.json",
    )
    _write_csv(files.nurses, NURSE_COLUMNS, payload["nurses"])
    _write_csv(files.shifts, SHIFT_COLUMNS, payload["shifts"])
    _write_csv(files.demand, DEMAND_COLUMNS, payload["demand"])
    _atomic_write(files.config, _dumps(payload["config"]) + "\n")
    return files


def roster_to_document(instance: RosterInstance, roster: Roster) -> dict:
    hz = instance.horizon
    assignments = {
        t: {
            s.id: sorted(
                n.id for n in instance.nurses if roster.works(n.id, s.id, t)
            )
            for s in instance.shifts
        }
        for t in hz.day_labels
    }
    return {
        "fingerprint": instance_fingerprint(instance),
        "assignments": assignments,
        "slack": [
            {"shift": s, "day": t, "units": u}
            for (s, t), u in sorted(roster.j.items())
        ],
        "overtime": [
            {"nurse": n, "week": k, "hours": h}
            for (n, k), h in sorted(roster.beta.items())
        ],
        "z": roster.z,
        "objective": roster.objective,
    }


def export_roster(instance: RosterInstance, roster: Roster, destination: Path):
    _atomic_write(
        Path(destination), _dumps(roster_to_document(instance, roster)) + "\n"
    )


def import_roster(instance: RosterInstance, source: Path) -> Roster:
    """Read a roster document back; refuses documents exported for a
    different instance."""
    with open(source, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("fingerprint") != instance_fingerprint(instance):
        raise ValueError(
            "roster document fingerprint does not match this instance"
        )
    x = frozenset(
        (nid, sid, day)
        for day, by_shift in doc["assignments"].items()
        for sid, nids in by_shift.items()
        for nid in nids
    )
    j = {(e["shift"], e["day"]): int(e["units"]) for e in doc["slack"]}
    beta = {(e["nurse"], int(e["week"])): float(e["hours"]) for e in doc["overtime"]}
    return Roster(
        x=x, j=j, beta=beta, z=float(doc["z"]), objective=float(doc["objective"])
    )


def export_nurse_sheets(
    instance: RosterInstance, roster: Roster, directory: Path
):
    """One CSV per nurse (day, entry, hours) plus a summary table."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    hz = instance.horizon
    summary_rows = []
    for n in instance.nurses:
        rows = []
        worked_night_before = False
        total_hours = 0.0
        load = 0.0
        for t in hz.day_labels:
            todays = [
                s for s in instance.shifts if roster.works(n.id, s.id, t)
            ]
            if todays:
                shift = todays[0]
                rows.append(
                    {"day_label": t, "entry": shift.id,
                     "hours": _fmt(shift.duration_hours)}
                )
                total_hours += shift.duration_hours
                load += instance.weights[(shift.id, t)]
            elif worked_night_before:
                rows.append({"day_label": t, "entry": POST_NIGHT_REST, "hours": "0"})
            else:
                rows.append({"day_label": t, "entry": REST, "hours": "0"})
            worked_night_before = any(s.is_night for s in todays)
        _write_csv(directory / f"{n.id}.csv", ["day_label", "entry", "hours"], rows)
        overtime = sum(
            h for (nid, _), h in roster.beta.items() if nid == n.id
        )
        summary_rows.append(
            {
                "nurse": n.id,
                "total_hours": _fmt(total_hours),
                "overtime": _fmt(overtime),
                "weighted_workload": _fmt(load),
            }
        )
    _write_csv(
        directory / "summary.csv",
        ["nurse", "total_hours", "overtime", "weighted_workload"],
        summary_rows,
    )


def kpi_report_to_dict(report: KpiReport) -> dict:
    d = asdict(report)
    d["per_nurse_overtime"] = dict(sorted(report.per_nurse_overtime.items()))
    return d


def kpi_delta_to_dict(delta: KpiDelta) -> dict:
    return asdict(delta)


def understaffing_to_dict(report: UnderstaffingReport) -> dict:
    return {
        "entries": [asdict(e) for e in report.entries],
        "total_slack": report.total_slack,
    }


def hiring_plan_to_dict(plan: HiringPlan) -> dict:
    return {
        "iterations": [
            {
                "nurse_count": it.nurse_count,
                "objective": it.objective,
                "total_slack": it.total_slack,
                "kpis": kpi_report_to_dict(it.kpis),
            }
            for it in plan.iterations
        ],
        "hires_accepted": plan.hires_accepted,
        "stop_reason": plan.stop_reason,
        "final_objective": (
            plan.final_roster.objective if plan.final_roster else None
        ),
        "final_nurse_count": len(plan.final_instance.nurses),
    }


def export_kpis(report_or_plan, destination: Path):
    """Serialize a KpiReport, KpiDelta, UnderstaffingReport or HiringPlan."""
    if isinstance(report_or_plan, KpiReport):
        doc = {"kind": "kpi-report", **kpi_report_to_dict(report_or_plan)}
    elif isinstance(report_or_plan, KpiDelta):
        doc = {"kind": "kpi-delta", **kpi_delta_to_dict(report_or_plan)}
    elif isinstance(report_or_plan, UnderstaffingReport):
        doc = {"kind": "understaffing", **understaffing_to_dict(report_or_plan)}
    elif isinstance(report_or_plan, HiringPlan):
        doc = {"kind": "hiring-plan", **hiring_plan_to_dict(report_or_plan)}
    else:
        raise TypeError(f"cannot export {type(report_or_plan).__name__}")
    _atomic_write(Path(destination), _dumps(doc) + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


def _fmt(value: float) -> str:
    return f"{value:g}"


def _atomic_write(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: Path, columns: list[str], rows: list[dict]):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(c, "")) for c in columns))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)  # shortest round-trip form
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text
