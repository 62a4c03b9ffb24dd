"""Bounded-variable simplex pivoting kernels.

These are the hot loops of the LP engine. They are written in a
numba-compatible subset of numpy so the same source runs either compiled
(``@njit``) or as plain Python/numpy; `rosterly.solver.backend` picks the
variant from the ``ROSTERLY_BACKEND`` environment variable.

Conventions shared by both kernels:

- ``AT`` is the constraint matrix transposed, shape (n, m), C-contiguous,
  so ``AT[j]`` is column j of A.
- ``vstat[j]``: 0 = nonbasic at lower bound, 1 = nonbasic at upper bound,
  2 = basic. Fixed columns (lo == up) never enter the basis.
- ``basis`` holds the m basic column indices; ``B_inv`` is the explicit
  basis inverse, updated by product-form pivots and refactorized
  periodically.

Return codes: 0 optimal, 1 unbounded (primal) / infeasible (dual),
2 iteration limit, 3 numerical failure.
"""

import os

import numpy as np

REFACTOR_EVERY = 100
PIVOT_MIN = 1e-9


def refactorize(AT, basis):
    """Rebuild the explicit basis inverse from scratch."""
    m = basis.shape[0]
    B = np.empty((m, m))
    for k in range(m):
        col = AT[basis[k]]
        for r in range(m):
            B[r, k] = col[r]
    return np.ascontiguousarray(np.linalg.inv(B))


def recompute_basics(AT, b, basis, vstat, x):
    """Recompute basic values x_B = B_inv (b - N x_N); drops accumulated
    floating drift after refactorization."""
    n = AT.shape[0]
    m = b.shape[0]
    resid = b.copy()
    for j in range(n):
        if vstat[j] != 2 and x[j] != 0.0:
            resid -= AT[j] * x[j]
    B_inv = refactorize(AT, basis)
    xb = np.dot(B_inv, resid)
    for r in range(m):
        x[basis[r]] = xb[r]
    return B_inv


def primal_simplex(AT, b, c, lo, up, basis, vstat, x, B_inv, tol, max_iter):
    """Bounded-variable primal simplex; mutates basis/vstat/x in place.

    Returns (code, iterations, B_inv).
    """
    n, m = AT.shape
    B_inv = np.ascontiguousarray(B_inv)
    bland = False
    stall = 0
    since_refactor = 0
    it = 0
    while it < max_iter:
        it += 1
        cb = np.empty(m)
        for r in range(m):
            cb[r] = c[basis[r]]
        y = np.dot(cb, B_inv)
        d = c - np.dot(AT, y)

        # Entering column: Dantzig (most violating), Bland under stalling.
        enter = -1
        best = tol
        for j in range(n):
            st = vstat[j]
            if st == 2 or lo[j] == up[j]:
                continue
            if st == 0:
                viol = -d[j]
            else:
                viol = d[j]
            if viol > best:
                if bland:
                    enter = j
                    break
                best = viol
                enter = j
        if enter == -1:
            return 0, it, B_inv

        sign = 1.0 if vstat[enter] == 0 else -1.0
        alpha = np.dot(B_inv, AT[enter])

        # Ratio test: basic variables hitting a bound, or the entering
        # column flipping to its opposite bound.
        t = up[enter] - lo[enter]
        leave = -1
        leave_to_upper = False
        best_a = 0.0
        for r in range(m):
            a = sign * alpha[r]
            bi = basis[r]
            if a > PIVOT_MIN:
                limit = (x[bi] - lo[bi]) / a
                to_upper = False
            elif a < -PIVOT_MIN:
                if up[bi] == np.inf:
                    continue
                limit = (up[bi] - x[bi]) / (-a)
                to_upper = True
            else:
                continue
            if limit < -1e-9:
                limit = 0.0
            if limit < t - 1e-10 or (limit < t + 1e-10 and abs(a) > best_a and leave != -1):
                t = limit
                leave = r
                leave_to_upper = to_upper
                best_a = abs(a)
        if t == np.inf:
            return 1, it, B_inv

        if t <= 1e-12:
            stall += 1
            if stall > 2 * (m + n):
                bland = True
        else:
            stall = 0
            bland = False

        # Apply the step.
        x[enter] += sign * t
        for r in range(m):
            x[basis[r]] -= sign * alpha[r] * t

        if leave == -1:
            # Bound flip: entering moves to its opposite bound.
            if vstat[enter] == 0:
                x[enter] = up[enter]
                vstat[enter] = 1
            else:
                x[enter] = lo[enter]
                vstat[enter] = 0
            continue

        piv = alpha[leave]
        if abs(piv) < PIVOT_MIN:
            B_inv = recompute_basics(AT, b, basis, vstat, x)
            continue
        lv = basis[leave]
        if leave_to_upper:
            x[lv] = up[lv]
            vstat[lv] = 1
        else:
            x[lv] = lo[lv]
            vstat[lv] = 0
        basis[leave] = enter
        vstat[enter] = 2

        row = B_inv[leave] / piv
        for i in range(m):
            if i != leave:
                B_inv[i] -= alpha[i] * row
        B_inv[leave, :] = row

        since_refactor += 1
        if since_refactor >= REFACTOR_EVERY:
            since_refactor = 0
            B_inv = recompute_basics(AT, b, basis, vstat, x)
    return 2, it, B_inv


def dual_simplex(AT, b, c, lo, up, basis, vstat, x, B_inv, tol, max_iter):
    """Bounded-variable dual simplex: restores primal feasibility from a
    dual-feasible basis (warm restarts after branching bound changes).

    Returns (code, iterations, B_inv).
    """
    n, m = AT.shape
    B_inv = np.ascontiguousarray(B_inv)
    since_refactor = 0
    it = 0
    while it < max_iter:
        it += 1

        # Leaving row: basic variable most violating its bounds.
        leave = -1
        worst = tol
        below = False
        for r in range(m):
            bi = basis[r]
            v = lo[bi] - x[bi]
            if v > worst:
                worst = v
                leave = r
                below = True
            v = x[bi] - up[bi]
            if v > worst:
                worst = v
                leave = r
                below = False
        if leave == -1:
            return 0, it, B_inv

        cb = np.empty(m)
        for r in range(m):
            cb[r] = c[basis[r]]
        y = np.dot(cb, B_inv)
        d = c - np.dot(AT, y)
        rho = np.dot(AT, B_inv[leave])  # row `leave` of B_inv A

        # Dual ratio test. Increasing x_j by t changes x_B[leave] by
        # -rho[j] t; pick the entering column keeping reduced costs
        # sign-consistent, i.e. minimizing |d_j / rho_j|.
        enter = -1
        best_ratio = np.inf
        best_a = 0.0
        for j in range(n):
            st = vstat[j]
            if st == 2 or lo[j] == up[j]:
                continue
            a = rho[j]
            if below:
                # need x_B[leave] to increase
                ok = (st == 0 and a < -PIVOT_MIN) or (st == 1 and a > PIVOT_MIN)
            else:
                ok = (st == 0 and a > PIVOT_MIN) or (st == 1 and a < -PIVOT_MIN)
            if not ok:
                continue
            ratio = abs(d[j]) / abs(a)
            if ratio < best_ratio - 1e-10 or (
                ratio < best_ratio + 1e-10 and abs(a) > best_a
            ):
                best_ratio = ratio
                enter = j
                best_a = abs(a)
        if enter == -1:
            return 1, it, B_inv

        lv = basis[leave]
        target = lo[lv] if below else up[lv]
        need = target - x[lv]  # change required on the leaving variable
        a_le = rho[enter]
        t = need / (-a_le)  # step on the entering variable

        alpha = np.dot(B_inv, AT[enter])
        x[enter] += t
        for r in range(m):
            x[basis[r]] -= alpha[r] * t
        x[lv] = target
        vstat[lv] = 0 if below else 1
        basis[leave] = enter
        vstat[enter] = 2

        piv = alpha[leave]
        if abs(piv) < PIVOT_MIN:
            return 3, it, B_inv
        row = B_inv[leave] / piv
        for i in range(m):
            if i != leave:
                B_inv[i] -= alpha[i] * row
        B_inv[leave, :] = row

        since_refactor += 1
        if since_refactor >= REFACTOR_EVERY:
            since_refactor = 0
            B_inv = recompute_basics(AT, b, basis, vstat, x)
    return 2, it, B_inv


BACKEND = "numpy"
if os.environ.get("ROSTERLY_BACKEND", "numba").strip().lower() != "numpy":
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        # Rebinding in module scope lets the compiled loops resolve the
        # compiled helpers at (lazy) compile time.
        refactorize = njit(cache=True)(refactorize)
        recompute_basics = njit(cache=True)(recompute_basics)
        primal_simplex = njit(cache=True)(primal_simplex)
        dual_simplex = njit(cache=True)(dual_simplex)
        BACKEND = "numba"
