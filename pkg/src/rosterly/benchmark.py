"""Scale benchmark: hospital-sized instances and kernel backend timing.

``python -m rosterly.benchmark`` solves the desk-scale point (10 nurses,
4 weeks, 3 shifts) to optimality; ``--all`` also runs the larger points
(up to 40 nurses / 8 weeks) non-gating, printing the incumbent gap at the
cutoff. ``--compare-backends`` times the numba and pure-numpy kernels on
the same instance in fresh subprocesses (the backend is fixed at import).
"""

from __future__ import annotations

import argparse
import random
import subprocess
import sys
import textwrap

from .model import (
    DemandSeries,
    Horizon,
    Nurse,
    NurseContract,
    Penalties,
    RosterInstance,
    ShiftType,
    WeightTable,
)
from .solver import BACKEND, SolveOptions, solve_instance

SCALE_POINTS = [(10, 4), (20, 4), (20, 6), (40, 6), (40, 8)]
GATING_POINT = (10, 4)


def build_scale_instance(n_nurses: int, weeks: int, seed: int = 7) -> RosterInstance:
    """A moderate-demand ward: 3 shifts (one night), 7-day weeks.

    Demand is planned the way wards actually staff: in whole-team units
    (multiples of the per-nurse patient capacity), with the horizon total
    trimmed so contracted hours divide evenly across the roster.  Without
    that alignment the instance is dominated by unavoidable rounding
    slack rather than by the scheduling problem itself.
    """
    rng = random.Random(seed)
    cap = 4
    shifts = (
        ShiftType("EARLY", "Early", 8.0, cap),
        ShiftType("LATE", "Late", 8.0, cap),
        ShiftType("NIGHT", "Night", 8.0, cap, is_night=True),
    )
    labels = tuple(f"w{k}d{d}" for k in range(1, weeks + 1) for d in range(1, 8))
    horizon = Horizon(weeks=weeks, day_labels=labels, days_per_week=7)
    # Mixed contract tiers (full-time, reduced, capped) as on a real ward;
    # identical contracts make nurses interchangeable and the search
    # degenerates into symmetric branch-and-bound churn.
    tiers = (
        NurseContract(h_min=24.0, h_std=40.0, h_max=48.0),
        NurseContract(h_min=16.0, h_std=40.0, h_max=48.0),
        NurseContract(h_min=24.0, h_std=40.0, h_max=40.0),
    )
    nurses = tuple(
        Nurse(f"n{i}", f"Nurse {i}", tiers[(i - 1) % len(tiers)])
        for i in range(1, n_nurses + 1)
    )
    # Staffing plan in per-shift nurse counts d (patients = cap * d).
    # One surge day a week, preceded by a lighter day: the nurses resting
    # after the previous night must leave enough hands for the surge
    # (3*d_t <= n - d_{t-1}), or the demand is unmeetable by construction.
    d_base = max(2, n_nurses // 5)
    counts = []
    for _ in range(weeks):
        week = [d_base] * 7
        p = rng.randint(1, 6)
        week[p] += 1
        week[p - 1] -= 1
        counts.extend(week)
    # Trim the horizon onto a whole-nurse boundary by lightening normal
    # days (never raising them, which could break the surge headroom),
    # so the contracted workload divides evenly across the team.
    total = 3 * cap * sum(counts)  # patient-load == workload here
    step = 3 * cap
    idx = 0
    while (total // 3) % n_nurses and idx < len(counts):
        if counts[idx] == d_base:
            counts[idx] -= 1
            total -= step
        idx += 1
    demand = {t: cap * counts[i] for i, t in enumerate(labels)}
    weights = WeightTable(
        {(s.id, t): 2.0 if s.is_night else 1.0 for s in shifts for t in labels}
    )
    return RosterInstance(
        shifts=shifts,
        nurses=nurses,
        horizon=horizon,
        demand=DemandSeries(demand),
        weights=weights,
        penalties=Penalties(p1=1.0, big_m=1e6, hire_cost=10.0),
    )


def run_point(n: int, q: int, time_limit: float) -> dict:
    instance = build_scale_instance(n, q)
    n_x = len(instance.nurses) * len(instance.shifts) * len(instance.horizon.days)
    roster, result = solve_instance(
        instance, SolveOptions(time_limit_seconds=time_limit)
    )
    return {
        "n": n,
        "q": q,
        "binary_vars": n_x,
        "status": result.status,
        "objective": result.objective,
        "gap": result.gap,
        "nodes": result.stats.nodes,
        "simplex_iterations": result.stats.simplex_iterations,
        "time_s": result.stats.wall_time,
        "slack": roster.total_slack() if roster else None,
    }


_COMPARE_SNIPPET = textwrap.dedent(
    """
    import time
    from rosterly.benchmark import build_scale_instance
    from rosterly.solver import BACKEND, SolveOptions, solve_instance
    inst = build_scale_instance({n}, {q})
    t0 = time.perf_counter()
    _, res = solve_instance(inst, SolveOptions(time_limit_seconds={limit}))
    warm = time.perf_counter() - t0  # includes jit compile for numba
    t0 = time.perf_counter()
    _, res = solve_instance(inst, SolveOptions(time_limit_seconds={limit}))
    hot = time.perf_counter() - t0
    print(f"{{BACKEND}} first={{warm:.3f}}s repeat={{hot:.3f}}s "
          f"status={{res.status}} objective={{res.objective:.4f}} "
          f"nodes={{res.stats.nodes}}")
    """
)


def compare_backends(n: int, q: int, time_limit: float):
    import os

    for backend in ("numba", "numpy"):
        env = dict(os.environ, ROSTERLY_BACKEND=backend)
        code = _COMPARE_SNIPPET.format(n=n, q=q, limit=time_limit)
        subprocess.run([sys.executable, "-c", code], env=env, check=False)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="rosterly-benchmark", description=__doc__)
    parser.add_argument("--all", action="store_true",
                        help="run every scale point, not just the gating one")
    parser.add_argument("--time-limit", type=float, default=120.0,
                        help="gating-point budget (seconds)")
    parser.add_argument("--cutoff", type=float, default=300.0,
                        help="budget for the larger, non-gating points")
    parser.add_argument("--compare-backends", action="store_true",
                        help="time numba vs numpy kernels in subprocesses")
    args = parser.parse_args(argv)

    if args.compare_backends:
        n, q = GATING_POINT
        print(f"backend comparison on n={n}, q={q}:", flush=True)
        compare_backends(n, q, args.time_limit)
        return 0

    print(f"kernel backend: {BACKEND}")
    points = SCALE_POINTS if args.all else [GATING_POINT]
    for n, q in points:
        limit = args.time_limit if (n, q) == GATING_POINT else args.cutoff
        r = run_point(n, q, limit)
        gap = "-" if r["status"] == "optimal" else f"{r['gap']:.3e}"
        print(
            f"n={r['n']:>3} q={r['q']} x_vars={r['binary_vars']:>5} "
            f"status={r['status']:<13} objective={r['objective']:.4f} "
            f"gap={gap} nodes={r['nodes']} "
            f"iters={r['simplex_iterations']} time={r['time_s']:.2f}s "
            f"slack={r['slack']}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
