"""LP engine: standard-form conversion and the two-phase bounded simplex.

An `IlpModel` relaxation is converted once into equality standard form
``A x = b, lo <= x <= up`` with slack columns for inequalities and one
artificial column per row (used in phase 1, pinned to zero afterwards).
Branch-and-bound re-solves share the converted form and warm-start from a
parent basis via the dual simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..encoder import IlpModel
from . import backend

__all__ = ["LpResult", "StandardForm", "build_standard_form", "solve_lp"]

FEAS_TOL = 1e-7
MAX_ITER = 200_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
LIMIT = "limit"


@dataclass(frozen=True)
class Basis:
    """Opaque warm-start descriptor: basic column set + nonbasic statuses."""

    basis: np.ndarray  # int64 (m,)
    vstat: np.ndarray  # int8 (n_all,)


@dataclass(frozen=True)
class LpResult:
    status: str  # optimal | infeasible | unbounded | limit
    values: np.ndarray | None  # model-column values
    objective: float
    basis: Basis | None
    iterations: int
    # Live basis inverse matching `basis`; ownership transfers to the
    # next warm solve (diving) so re-solves skip the O(m^3) refactorize.
    b_inv: np.ndarray | None = None


class StandardForm:
    """Equality form of an IlpModel relaxation, built once per model."""

    def __init__(self, model: IlpModel):
        n0 = model.n_columns
        m = len(model.constraints)
        n_slack = sum(1 for c in model.constraints if c.sense != "==")
        n_total = n0 + n_slack
        n_all = n_total + m  # + artificials

        A = np.zeros((m, n_all))
        b = np.empty(m)
        lo = np.zeros(n_all)
        up = np.full(n_all, np.inf)
        c = np.zeros(n_all)

        for jcol, var in enumerate(model.columns):
            lo[jcol] = var.lower
            up[jcol] = var.upper
        for jcol, coef in model.objective:
            c[jcol] = coef

        slack = n0
        for r, con in enumerate(model.constraints):
            for jcol, coef in con.terms:
                A[r, jcol] = coef
            b[r] = con.rhs
            if con.sense == "<=":
                A[r, slack] = 1.0
                slack += 1
            elif con.sense == ">=":
                A[r, slack] = -1.0
                slack += 1
            A[r, n_total + r] = 1.0  # artificial

        self.m = m
        self.n0 = n0
        self.n_total = n_total
        self.n_all = n_all
        self.AT = np.ascontiguousarray(A.T)
        self.b = b
        self.lo = lo
        self.up = up
        self.c = c
        self.int_cols = np.array(
            [j for j, v in enumerate(model.columns) if v.kind in ("binary", "integer")],
            dtype=np.int64,
        )


def _cold_start(sf: StandardForm, lo, up):
    """Two-phase primal from the all-artificial basis.

    Returns (status, x, basis, vstat, iters).
    """
    m, n_all, n_total = sf.m, sf.n_all, sf.n_total
    x = np.zeros(n_all)
    vstat = np.zeros(n_all, dtype=np.int8)
    x[:n_total] = lo[:n_total]
    # Nonbasic finite-lower columns sit at their lower bound (model
    # columns all have finite lowers; slacks are >= 0).

    resid = sf.b - np.dot(x[:n_total], sf.AT[:n_total])
    basis = np.arange(n_total, n_all, dtype=np.int64)
    c1 = np.zeros(n_all)
    lo1 = lo.copy()
    up1 = up.copy()
    for r in range(m):
        art = n_total + r
        x[art] = resid[r]
        vstat[art] = 2
        if resid[r] >= 0.0:
            c1[art] = 1.0
            lo1[art], up1[art] = 0.0, np.inf
        else:
            c1[art] = -1.0
            lo1[art], up1[art] = -np.inf, 0.0
    B_inv = np.eye(m)

    code, it1, B_inv = backend.primal_simplex(
        sf.AT, sf.b, c1, lo1, up1, basis, vstat, x, B_inv, FEAS_TOL, MAX_ITER
    )
    iters = it1
    if code == 2 or code == 3:
        return LIMIT, x, basis, vstat, iters, B_inv
    phase1_obj = float(np.dot(c1, x))
    if phase1_obj > 1e-6:
        return INFEASIBLE, x, basis, vstat, iters, B_inv
    # Pin artificials to zero for phase 2 (basic ones stay, at value 0).
    lo2 = lo.copy()
    up2 = up.copy()
    lo2[n_total:] = 0.0
    up2[n_total:] = 0.0
    x[n_total:] = np.where(np.abs(x[n_total:]) < 1e-7, 0.0, x[n_total:])
    for j in range(n_total, n_all):
        if vstat[j] != 2:
            vstat[j] = 0
            x[j] = 0.0

    code, it2, B_inv = backend.primal_simplex(
        sf.AT, sf.b, sf.c, lo2, up2, basis, vstat, x, B_inv, FEAS_TOL, MAX_ITER
    )
    iters += it2
    if code == 1:
        return UNBOUNDED, x, basis, vstat, iters, B_inv
    if code != 0:
        return LIMIT, x, basis, vstat, iters, B_inv
    return OPTIMAL, x, basis, vstat, iters, B_inv


def _warm_start(sf: StandardForm, lo, up, basis_hint: Basis, b_inv_hint=None):
    """Dual-simplex restart from a parent-optimal basis after bound
    changes; falls back to a cold start on numerical trouble."""
    m, n_all, n_total = sf.m, sf.n_all, sf.n_total
    basis = basis_hint.basis.copy()
    vstat = basis_hint.vstat.copy()
    lo2 = lo.copy()
    up2 = up.copy()
    lo2[n_total:] = 0.0
    up2[n_total:] = 0.0

    x = np.zeros(n_all)
    in_basis = np.zeros(n_all, dtype=bool)
    in_basis[basis] = True
    for j in range(n_all):
        if not in_basis[j]:
            if vstat[j] == 1 and up2[j] != np.inf:
                x[j] = up2[j]
            else:
                vstat[j] = 0
                x[j] = lo2[j]
    if b_inv_hint is not None:
        # Reuse the parent's inverse: only bounds changed, not the basis.
        B_inv = b_inv_hint
        nonbasic = vstat != 2
        resid = sf.b - np.dot(x[nonbasic], sf.AT[nonbasic])
        x[basis] = np.dot(B_inv, resid)
    else:
        B_inv = backend.recompute_basics(sf.AT, sf.b, basis, vstat, x)

    code, it1, B_inv = backend.dual_simplex(
        sf.AT, sf.b, sf.c, lo2, up2, basis, vstat, x, B_inv, FEAS_TOL, MAX_ITER
    )
    iters = it1
    if code == 1:
        return INFEASIBLE, x, basis, vstat, iters, B_inv
    if code != 0:
        return None  # caller cold-starts
    # Primal cleanup: zero iterations when the dual restart is optimal.
    code, it2, B_inv = backend.primal_simplex(
        sf.AT, sf.b, sf.c, lo2, up2, basis, vstat, x, B_inv, FEAS_TOL, MAX_ITER
    )
    iters += it2
    if code == 1:
        return UNBOUNDED, x, basis, vstat, iters, B_inv
    if code != 0:
        return None
    return OPTIMAL, x, basis, vstat, iters, B_inv


def solve_arrays(
    sf: StandardForm,
    lo: np.ndarray,
    up: np.ndarray,
    basis_hint: Basis | None = None,
    b_inv_hint: np.ndarray | None = None,
):
    """Solve the LP over the given (possibly branched) bounds.

    `b_inv_hint`, when given, must be the basis inverse matching
    `basis_hint`; the caller gives up ownership (it is mutated)."""
    out = None
    if basis_hint is not None:
        out = _warm_start(sf, lo, up, basis_hint, b_inv_hint)
    if out is None:
        out = _cold_start(sf, lo, up)
    status, x, basis, vstat, iters, B_inv = out
    if status != OPTIMAL:
        return LpResult(status, None, math.nan, None, iters)
    obj = float(np.dot(sf.c, x))
    return LpResult(
        OPTIMAL,
        x[: sf.n0].copy(),
        obj,
        Basis(basis.copy(), vstat.copy()),
        iters,
        B_inv,
    )


def solve_lp(model: IlpModel, basis_hint: Basis | None = None) -> LpResult:
    """Solve the LP relaxation of a model (integrality dropped)."""
    sf = build_standard_form(model)
    return solve_arrays(sf, sf.lo, sf.up, basis_hint)


def build_standard_form(model: IlpModel) -> StandardForm:
    return StandardForm(model)
