"""Desk-scale exact MILP solving: bounded simplex LP engine, branch and
bound, greedy warm starts, and the exhaustive test oracle."""

from __future__ import annotations

from ..encoder import decode, encode, roster_to_values
from ..model import Roster, RosterInstance
from .backend import BACKEND
from .bnb import MilpResult, SolveOptions, solve
from .brute import BRUTE_FORCE_BIT_LIMIT, brute_force_solve
from .lp import LpResult, solve_lp
from .warm import warm_start

__all__ = [
    "BACKEND",
    "SolveOptions",
    "MilpResult",
    "LpResult",
    "solve",
    "solve_lp",
    "solve_instance",
    "warm_start",
    "brute_force_solve",
    "BRUTE_FORCE_BIT_LIMIT",
]


def solve_instance(
    instance: RosterInstance, opts: SolveOptions = SolveOptions()
) -> tuple[Roster | None, MilpResult]:
    """Encode, warm-start, solve and decode in one step.

    Returns (roster, result); roster is None unless the result carries an
    incumbent.
    """
    model, index = encode(instance)
    incumbent = None
    warm = warm_start(instance)
    if warm is not None:
        incumbent = (roster_to_values(warm, index, instance), warm.objective)
    result = solve(model, opts, incumbent=incumbent)
    roster = None
    if result.values is not None:
        roster = decode(result.values, index, instance)
    return roster, result
