"""Command-line front door.

Exit codes: 0 success, 1 error (parse/validation/infeasible), 2 solver
budget exhausted (best incumbent still exported), 64 usage. Diagnostics go
to stderr; the machine-readable summary line goes to stdout.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import io as sio
from .kpi import compute_kpis
from .model import RosterInstance, validate_instance
from .planner import HiringOptions, detect_understaffing, plan_hiring
from .solver import SolveOptions, solve_instance

__all__ = ["main"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_LIMIT = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_instance_flags(p: argparse.ArgumentParser):
    p.add_argument("--nurses", required=True, help="nurses table (CSV)")
    p.add_argument("--shifts", required=True, help="shifts table (CSV)")
    p.add_argument("--demand", required=True, help="demand table (CSV)")
    p.add_argument("--config", required=True, help="config document (JSON)")
    p.add_argument("--p1", type=float, help="override overtime weight")
    p.add_argument("--hire-cost", type=float, help="override hire cost c")
    p.add_argument("--big-m", type=float, help="override understaffing weight M")


def build_parser() -> _Parser:
    parser = _Parser(prog="rosterly", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an instance file set")
    _add_instance_flags(p)

    p = sub.add_parser("solve", help="solve and export roster, sheets, KPIs")
    _add_instance_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--time-limit", type=float, default=60.0)

    p = sub.add_parser("staff-plan", help="run the iterative hiring loop")
    _add_instance_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--max-hires", type=int, default=50)

    p = sub.add_parser("kpi", help="KPI report from a stored roster")
    _add_instance_flags(p)
    p.add_argument("--roster", required=True, help="roster document (JSON)")
    p.add_argument("--out", help="write report here instead of stdout")

    p = sub.add_parser("export", help="re-derive sheets and KPIs from a stored roster")
    _add_instance_flags(p)
    p.add_argument("--roster", required=True, help="roster document (JSON)")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _load(args) -> RosterInstance:
    files = sio.InstanceFileSet(
        nurses=Path(args.nurses),
        shifts=Path(args.shifts),
        demand=Path(args.demand),
        config=Path(args.config),
    )
    instance = sio.load_instance(files)
    pen = instance.penalties
    if args.p1 is not None:
        pen = replace(pen, p1=args.p1)
    if args.hire_cost is not None:
        pen = replace(pen, hire_cost=args.hire_cost)
    if args.big_m is not None:
        pen = replace(pen, big_m=args.big_m)
    return replace(instance, penalties=pen)


def _summary(status: str, objective, slack, hires: int, seconds: float):
    obj = "-" if objective is None else f"{objective:.6f}"
    print(
        f"status={status} objective={obj} slack={slack} hires={hires} "
        f"time_s={seconds:.3f}"
    )


def _cmd_validate(args) -> int:
    try:
        instance = _load(args)
    except sio.InstanceLoadError as exc:
        for issue in exc.issues:
            loc = issue.file + (f":{issue.line}" if issue.line is not None else "")
            field = f" [{issue.field}]" if issue.field else ""
            print(f"error: {loc}{field}: {issue.message}", file=sys.stderr)
        print(f"status=invalid errors={len(exc.issues)} warnings=0")
        return EXIT_ERROR
    report = validate_instance(instance)
    for w in report.warnings:
        print(f"warning [{w.code}]: {w.message}", file=sys.stderr)
    for e in report.errors:
        print(f"error [{e.code}]: {e.message}", file=sys.stderr)
    print(f"status={'ok' if report.ok else 'invalid'} "
          f"errors={len(report.errors)} warnings={len(report.warnings)}")
    return EXIT_OK if report.ok else EXIT_ERROR


def _cmd_solve(args) -> int:
    instance = _load(args)
    opts = SolveOptions(time_limit_seconds=args.time_limit)
    roster, result = solve_instance(instance, opts)
    out = Path(args.out)
    if roster is None:
        print(f"no roster: solver status {result.status}", file=sys.stderr)
        _summary(result.status, None, "-", 0, result.stats.wall_time)
        return EXIT_ERROR
    sio.export_roster(instance, roster, out / "roster.json")
    sio.export_nurse_sheets(instance, roster, out / "sheets")
    sio.export_kpis(compute_kpis(instance, roster), out / "kpis.json")
    sio.export_kpis(
        detect_understaffing(instance, roster), out / "understaffing.json"
    )
    print(
        f"nodes={result.stats.nodes} "
        f"simplex_iterations={result.stats.simplex_iterations}",
        file=sys.stderr,
    )
    if result.status == "optimal":
        _summary("optimal", roster.objective, roster.total_slack(), 0,
                 result.stats.wall_time)
        return EXIT_OK
    print(f"budget exhausted, gap={result.gap:.3e}", file=sys.stderr)
    _summary(result.status, roster.objective, roster.total_slack(), 0,
             result.stats.wall_time)
    return EXIT_LIMIT


def _cmd_staff_plan(args) -> int:
    import time

    instance = _load(args)
    t0 = time.perf_counter()
    plan = plan_hiring(
        instance,
        HiringOptions(
            max_hires=args.max_hires,
            solve_options=SolveOptions(time_limit_seconds=args.time_limit),
        ),
    )
    elapsed = time.perf_counter() - t0
    out = Path(args.out)
    sio.export_kpis(plan, out / "hiring_plan.json")
    if plan.final_roster is not None:
        sio.export_roster(plan.final_instance, plan.final_roster,
                          out / "roster.json")

    print(f"{'nurses':>8} {'objective':>16} {'slack':>6}", file=sys.stderr)
    for it in plan.iterations:
        print(
            f"{it.nurse_count:>8} {it.objective:>16.4f} {it.total_slack:>6}",
            file=sys.stderr,
        )
    print(f"stop: {plan.stop_reason}", file=sys.stderr)

    if plan.final_roster is None:
        _summary("limit_reached", None, "-", plan.hires_accepted, elapsed)
        return EXIT_ERROR
    status = "optimal" if plan.stop_reason != "solver-limit" else "limit_reached"
    _summary(status, plan.final_roster.objective,
             plan.final_roster.total_slack(), plan.hires_accepted, elapsed)
    return EXIT_OK if plan.stop_reason != "solver-limit" else EXIT_LIMIT


def _cmd_kpi(args) -> int:
    instance = _load(args)
    roster = sio.import_roster(instance, Path(args.roster))
    report = compute_kpis(instance, roster)
    if args.out:
        sio.export_kpis(report, Path(args.out))
    else:
        print(sio._dumps({"kind": "kpi-report", **sio.kpi_report_to_dict(report)}))
    return EXIT_OK


def _cmd_export(args) -> int:
    instance = _load(args)
    roster = sio.import_roster(instance, Path(args.roster))
    out = Path(args.out)
    sio.export_nurse_sheets(instance, roster, out / "sheets")
    sio.export_kpis(compute_kpis(instance, roster), out / "kpis.json")
    sio.export_kpis(detect_understaffing(instance, roster),
                    out / "understaffing.json")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "staff-plan": _cmd_staff_plan,
    "kpi": _cmd_kpi,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except sio.InstanceLoadError as exc:
        for issue in exc.issues:
            loc = issue.file
            if issue.line is not None:
                loc += f":{issue.line}"
            if issue.field:
                loc += f" [{issue.field}]"
            print(f"error: {loc}: {issue.message}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
