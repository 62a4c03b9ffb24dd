"""Branch-and-bound over the LP engine.

Search order is fixed for reproducibility: depth-first diving on the
floor child, falling back to best-bound node selection; branching picks
the most fractional integer column with lowest-index tie-breaking.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..encoder import IlpModel
from . import lp

__all__ = ["SolveOptions", "MilpResult", "solve"]

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
LIMIT_REACHED = "limit_reached"


@dataclass(frozen=True)
class SolveOptions:
    time_limit_seconds: float = 60.0
    integrality_tol: float = 1e-6
    rel_gap_tol: float = 1e-9
    node_limit: int = 10**6


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    simplex_iterations: int
    wall_time: float


@dataclass(frozen=True)
class MilpResult:
    status: str  # optimal | feasible | infeasible | unbounded | limit_reached
    values: np.ndarray | None  # model-column values of the incumbent
    objective: float
    gap: float
    stats: SolveStats


@dataclass(order=True)
class _Node:
    bound: float
    seq: int
    overrides: dict = field(compare=False)  # col -> (lo, up)
    basis: object = field(compare=False)  # parent lp.Basis


def _fractional_col(values: np.ndarray, int_cols: np.ndarray, tol: float) -> int:
    """Most fractional integer column, lowest index on ties; -1 if integral."""
    best = -1
    best_frac = tol
    for j in int_cols:
        v = values[j]
        frac = abs(v - round(v))
        if frac > best_frac + 1e-12:
            best_frac = frac
            best = int(j)
    return best


def solve(
    model: IlpModel,
    opts: SolveOptions = SolveOptions(),
    incumbent: tuple[np.ndarray, float] | None = None,
) -> MilpResult:
    """Solve a MILP to proven optimality (or an honest gap on budget
    exhaustion). `incumbent` is an optional feasible (values, objective)
    warm start used for pruning."""
    t0 = time.perf_counter()
    sf = lp.build_standard_form(model)
    int_cols = sf.int_cols

    best_values = None
    best_obj = math.inf
    if incumbent is not None:
        best_values = np.asarray(incumbent[0], dtype=float).copy()
        best_obj = float(incumbent[1])

    total_iters = 0
    nodes = 0
    seq = 0
    heap: list[_Node] = []

    def lp_solve(overrides, basis, b_inv=None):
        lo = sf.lo.copy()
        up = sf.up.copy()
        for col, (l, u) in overrides.items():
            lo[col] = l
            up[col] = u
        return lp.solve_arrays(sf, lo, up, basis, b_inv)

    root = lp_solve({}, None)
    total_iters += root.iterations
    nodes += 1
    if root.status == lp.INFEASIBLE:
        return MilpResult(
            INFEASIBLE, None, math.nan, math.inf,
            SolveStats(nodes, total_iters, time.perf_counter() - t0),
        )
    if root.status == lp.UNBOUNDED:
        return MilpResult(
            UNBOUNDED, None, -math.inf, math.inf,
            SolveStats(nodes, total_iters, time.perf_counter() - t0),
        )
    if root.status != lp.OPTIMAL:
        return _exhausted(best_values, best_obj, -math.inf, nodes, total_iters, t0, opts)

    root_bound = root.objective
    current: tuple[_Node, lp.LpResult] | None = (
        _Node(root.objective, seq, {}, None),
        root,
    )
    seq += 1

    def prune_threshold() -> float:
        if best_obj == math.inf:
            return math.inf
        # 1e-7 absolute floor: LP bounds carry that much numerical noise,
        # and no two distinct objective values sit closer in practice.
        return best_obj - max(opts.rel_gap_tol * abs(best_obj), 1e-7)

    while True:
        if current is None:
            # Best-bound fallback once a dive bottoms out.
            while heap and heap[0].bound >= prune_threshold():
                heapq.heappop(heap)
            if not heap:
                break
            node = heapq.heappop(heap)
            if time.perf_counter() - t0 > opts.time_limit_seconds or nodes >= opts.node_limit:
                heapq.heappush(heap, node)
                break
            res = lp_solve(node.overrides, node.basis)
            total_iters += res.iterations
            nodes += 1
            if res.status != lp.OPTIMAL:
                if res.status == lp.INFEASIBLE:
                    continue
                heapq.heappush(heap, node)  # engine budget: keep it open
                break
            current = (node, res)
            continue

        node, res = current
        current = None
        if res.objective >= prune_threshold():
            continue
        branch_col = _fractional_col(res.values, int_cols, opts.integrality_tol)
        if branch_col == -1:
            if res.objective < best_obj:
                best_obj = res.objective
                best_values = res.values.copy()
            continue

        v = res.values[branch_col]
        fl = math.floor(v + opts.integrality_tol)
        lo0, up0 = node.overrides.get(
            branch_col, (sf.lo[branch_col], sf.up[branch_col])
        )
        floor_ov = dict(node.overrides)
        floor_ov[branch_col] = (lo0, float(fl))
        ceil_ov = dict(node.overrides)
        ceil_ov[branch_col] = (float(fl + 1), up0)

        heapq.heappush(heap, _Node(res.objective, seq, ceil_ov, res.basis))
        seq += 1

        if time.perf_counter() - t0 > opts.time_limit_seconds or nodes >= opts.node_limit:
            heapq.heappush(heap, _Node(res.objective, seq, floor_ov, res.basis))
            seq += 1
            break

        # Dive re-solves inherit the live basis inverse from the parent,
        # so only heap pops pay for a fresh factorization.
        child = lp_solve(floor_ov, res.basis, res.b_inv)
        total_iters += child.iterations
        nodes += 1
        if child.status == lp.OPTIMAL:
            current = (_Node(child.objective, seq, floor_ov, child.basis), child)
            seq += 1
        elif child.status != lp.INFEASIBLE:
            # engine budget exhausted: keep the child open and stop
            heapq.heappush(heap, _Node(res.objective, seq, floor_ov, res.basis))
            seq += 1
            break

    wall = time.perf_counter() - t0
    open_bound = min((n.bound for n in heap), default=math.inf)
    if current is not None:
        open_bound = min(open_bound, current[0].bound)
    exhausted = heap or current is not None
    if not exhausted:
        if best_values is None:
            return MilpResult(
                INFEASIBLE, None, math.nan, math.inf,
                SolveStats(nodes, total_iters, wall),
            )
        return MilpResult(
            OPTIMAL, best_values, best_obj, 0.0,
            SolveStats(nodes, total_iters, wall),
        )
    lb = min(open_bound, best_obj)
    return _exhausted(best_values, best_obj, lb, nodes, total_iters, t0, opts)


def _exhausted(best_values, best_obj, lb, nodes, iters, t0, opts):
    wall = time.perf_counter() - t0
    stats = SolveStats(nodes, iters, wall)
    if best_values is None:
        return MilpResult(LIMIT_REACHED, None, math.nan, math.inf, stats)
    gap = (best_obj - lb) / max(1.0, abs(best_obj))
    if best_obj - lb <= max(opts.rel_gap_tol * abs(best_obj), 1e-7):
        return MilpResult(OPTIMAL, best_values, best_obj, 0.0, stats)
    return MilpResult(FEASIBLE, best_values, best_obj, gap, stats)
