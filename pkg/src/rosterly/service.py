"""HTTP/JSON planner service.

Sessions hold an immutable instance; solve / staff-plan jobs run on a
single FIFO worker thread (one solver at a time) and what-if re-solves
with identical parameters are served from a per-session result cache.

Endpoints:
    POST /api/sessions                   create session from instance payload
    POST /api/sessions/{id}/jobs         submit solve | staff-plan job
    GET  /api/jobs/{id}                  poll job status / result
    GET  /api/sessions/{id}/roster       latest roster, ?view=nurse:{id}|day:{label}
    GET  /api/sessions/{id}/kpis         latest KPI report + delta vs baseline
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import queue
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import io as sio
from .kpi import compute_kpis, kpi_delta
from .model import NurseContract, Roster, RosterInstance
from .planner import HiringOptions, detect_understaffing, plan_hiring
from .solver import SolveOptions, solve_instance

__all__ = ["create_app", "main"]

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"


@dataclass
class _Job:
    id: str
    session_id: str
    kind: str
    params: dict
    status: str = QUEUED
    result: dict | None = None
    reason: str | None = None
    roster: Roster | None = None
    instance: RosterInstance | None = None


@dataclass
class _Session:
    id: str
    instance: RosterInstance
    created_at: float
    cache: dict[str, str] = field(default_factory=dict)  # param key -> job id
    cache_hits: int = 0
    baseline_job_id: str | None = None
    latest_done_job_id: str | None = None


def _error(status: int, code: str, message: str, locations=()):
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "locations": list(locations)},
    )


def _roster_views(instance: RosterInstance, roster: Roster) -> dict:
    """Per-nurse and per-day projections of a roster for drop-down UIs."""
    hz = instance.horizon
    by_nurse: dict[str, list[dict]] = {}
    for n in instance.nurses:
        rows = []
        night_before = False
        for t in hz.day_labels:
            todays = [s for s in instance.shifts if roster.works(n.id, s.id, t)]
            if todays:
                entry = todays[0].id
                hours = todays[0].duration_hours
            else:
                entry = sio.POST_NIGHT_REST if night_before else sio.REST
                hours = 0.0
            rows.append({"day": t, "entry": entry, "hours": hours})
            night_before = any(s.is_night for s in todays)
        by_nurse[n.id] = rows
    by_day = {
        t: [
            {
                "shift": s.id,
                "nurses": sorted(
                    n.id for n in instance.nurses if roster.works(n.id, s.id, t)
                ),
                "slack": roster.slack(s.id, t),
            }
            for s in instance.shifts
        ]
        for t in hz.day_labels
    }
    return {"by_nurse": by_nurse, "by_day": by_day}


def _normalize_params(instance: RosterInstance, raw: dict) -> dict:
    pen = instance.penalties
    params = {
        "p1": float(raw.get("p1", pen.p1)),
        "hire_cost": float(raw.get("hire_cost", pen.hire_cost)),
        "big_m": float(raw.get("big_m", pen.big_m)),
        "time_limit": float(raw["time_limit"]) if "time_limit" in raw else None,
        "max_hires": int(raw.get("max_hires", 50)),
    }
    template = raw.get("template")
    if template is not None:
        params["template"] = {
            "h_min": float(template["h_min"]),
            "h_std": float(template["h_std"]),
            "h_max": float(template["h_max"]),
        }
    return params


def create_app(time_limit: float | None = None, spool: str | None = None) -> FastAPI:
    """Build the service app. `time_limit` caps per-solve wall time;
    `spool` (optional directory) receives one exported document per
    completed job."""
    default_limit = time_limit or float(os.environ.get("ROSTERLY_TIME_LIMIT", 60))
    spool = spool or os.environ.get("ROSTERLY_SPOOL")

    app = FastAPI(title="rosterly planner service")
    sessions: dict[str, _Session] = {}
    jobs: dict[str, _Job] = {}
    lock = threading.RLock()
    work: "queue.Queue[str]" = queue.Queue()
    counter = itertools.count(1)

    def _run_job(job: _Job):
        session = sessions[job.session_id]
        params = job.params
        pen = replace(
            session.instance.penalties,
            p1=params["p1"],
            hire_cost=params["hire_cost"],
            big_m=params["big_m"],
        )
        instance = replace(session.instance, penalties=pen)
        limit = params["time_limit"] or default_limit
        opts = SolveOptions(time_limit_seconds=limit)

        result: dict[str, Any] = {"kind": job.kind, "params": params}
        if job.kind == "solve":
            roster, milp = solve_instance(instance, opts)
            if roster is None:
                raise RuntimeError(f"solver returned no roster ({milp.status})")
            result["solver_status"] = milp.status
            result["gap"] = milp.gap
            result["nodes"] = milp.stats.nodes
        else:
            template = None
            if "template" in params:
                t = params["template"]
                template = NurseContract(t["h_min"], t["h_std"], t["h_max"])
            plan = plan_hiring(
                instance,
                HiringOptions(
                    template=template,
                    max_hires=params["max_hires"],
                    solve_options=opts,
                ),
            )
            if plan.final_roster is None:
                raise RuntimeError("hiring plan aborted before a first solve")
            roster = plan.final_roster
            instance = plan.final_instance
            result["hires_accepted"] = plan.hires_accepted
            result["stop_reason"] = plan.stop_reason
            result["iterations"] = sio.hiring_plan_to_dict(plan)["iterations"]

        report = compute_kpis(instance, roster)
        result["objective"] = roster.objective
        result["kpis"] = sio.kpi_report_to_dict(report)
        result["understaffing"] = sio.understaffing_to_dict(
            detect_understaffing(instance, roster)
        )
        result["roster"] = _roster_views(instance, roster)

        with lock:
            if session.baseline_job_id is None:
                session.baseline_job_id = job.id
            baseline = jobs[session.baseline_job_id]
            base_report = (
                baseline.result["kpis"] if baseline.result else None
            )
            if baseline.id == job.id or base_report is None:
                base = report
            else:
                base = _report_from_dict(base_report)
            result["kpi_delta"] = sio.kpi_delta_to_dict(kpi_delta(base, report))
            job.result = result
            job.roster = roster
            job.instance = instance
            job.status = DONE
            session.latest_done_job_id = job.id
        if spool:
            sio._atomic_write(
                Path(spool) / f"{job.id}.json", sio._dumps(result) + "\n"
            )

    def _worker():
        while True:
            job_id = work.get()
            if job_id is None:
                return
            job = jobs[job_id]
            with lock:
                job.status = RUNNING
            try:
                _run_job(job)
            except Exception as exc:  # surfaced to the poller as failed
                with lock:
                    job.status = FAILED
                    job.reason = str(exc)

    worker = threading.Thread(target=_worker, daemon=True, name="rosterly-solver")
    worker.start()
    app.state.sessions = sessions
    app.state.jobs = jobs

    @app.post("/api/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad-json", "request body is not valid JSON")
        if not isinstance(payload, dict) or not payload:
            return _error(400, "bad-payload", "empty or non-object payload")
        try:
            instance = sio.payload_to_instance(payload)
        except sio.InstanceLoadError as exc:
            return _error(
                422,
                "invalid-instance",
                "instance payload failed validation",
                [
                    {
                        "file": i.file,
                        "line": i.line,
                        "field": i.field,
                        "message": i.message,
                    }
                    for i in exc.issues
                ],
            )
        with lock:
            sid = f"s{next(counter)}"
            sessions[sid] = _Session(sid, instance, time.time())
        return {"id": sid}

    @app.post("/api/sessions/{sid}/jobs", status_code=202)
    async def submit_job(sid: str, request: Request):
        with lock:
            session = sessions.get(sid)
        if session is None:
            return _error(404, "unknown-session", f"no session {sid!r}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad-json", "request body is not valid JSON")
        kind = body.get("kind")
        if kind not in ("solve", "staff-plan"):
            return _error(400, "bad-kind", "kind must be 'solve' or 'staff-plan'")
        try:
            params = _normalize_params(session.instance, body.get("params") or {})
        except (KeyError, TypeError, ValueError) as exc:
            return _error(400, "bad-params", f"malformed params: {exc}")
        key = json.dumps({"kind": kind, **params}, sort_keys=True)
        with lock:
            cached = session.cache.get(key)
            if cached is not None and jobs[cached].status != FAILED:
                session.cache_hits += 1
                return {"job_id": cached, "cached": True,
                        "cache_hits": session.cache_hits}
            jid = f"j{next(counter)}"
            jobs[jid] = _Job(jid, sid, kind, params)
            session.cache[key] = jid
        work.put(jid)
        return {"job_id": jid, "cached": False, "cache_hits": session.cache_hits}

    @app.get("/api/jobs/{jid}")
    async def get_job(jid: str):
        with lock:
            job = jobs.get(jid)
            if job is None:
                return _error(404, "unknown-job", f"no job {jid!r}")
            if job.status == FAILED:
                return {"status": FAILED, "reason": job.reason}
            if job.status != DONE:
                return {"status": job.status}
            return {"status": DONE, **job.result}

    @app.get("/api/sessions/{sid}/roster")
    async def get_roster(sid: str, view: str | None = None):
        with lock:
            session = sessions.get(sid)
            if session is None:
                return _error(404, "unknown-session", f"no session {sid!r}")
            if session.latest_done_job_id is None:
                return _error(404, "no-roster", "no completed job yet")
            job = jobs[session.latest_done_job_id]
        views = job.result["roster"]
        if view is None:
            return views
        if view.startswith("nurse:"):
            nid = view[len("nurse:"):]
            rows = views["by_nurse"].get(nid)
            if rows is None:
                return _error(404, "unknown-nurse", f"no nurse {nid!r}")
            return {"mode": "by-nurse", "key": nid, "rows": rows}
        if view.startswith("day:"):
            day = view[len("day:"):]
            rows = views["by_day"].get(day)
            if rows is None:
                return _error(404, "unknown-day", f"no day {day!r}")
            return {"mode": "by-day", "key": day, "rows": rows}
        return _error(400, "bad-view", "view must be nurse:{id} or day:{label}")

    @app.get("/api/sessions/{sid}/kpis")
    async def get_kpis(sid: str):
        with lock:
            session = sessions.get(sid)
            if session is None:
                return _error(404, "unknown-session", f"no session {sid!r}")
            if session.latest_done_job_id is None:
                return _error(404, "no-kpis", "no completed job yet")
            job = jobs[session.latest_done_job_id]
        return {
            "kpis": job.result["kpis"],
            "kpi_delta": job.result["kpi_delta"],
            "job_id": job.id,
        }

    return app


def _report_from_dict(d: dict):
    from .kpi import KpiReport

    return KpiReport(
        nurse_count=d["nurse_count"],
        min_workload=d["min_workload"],
        max_workload=d["max_workload"],
        min_weekly_hours=d["min_weekly_hours"],
        max_weekly_hours=d["max_weekly_hours"],
        total_overtime_hours=d["total_overtime_hours"],
        per_nurse_overtime=d["per_nurse_overtime"],
        total_slack_units=d["total_slack_units"],
        objective=d["objective"],
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="rosterly-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--time-limit", type=float, default=None)
    parser.add_argument("--spool", default=None)
    args = parser.parse_args(argv)

    import uvicorn

    uvicorn.run(
        create_app(time_limit=args.time_limit, spool=args.spool),
        host=args.host,
        port=args.port,
        log_level="warning",
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
