"""The optimal circuit-neighbor decision for LPs with a unique optimum.

Question: is there an optimum x* such that x* - x0 is a circuit
direction?  With a unique optimum the only candidate is x* itself, so the
decision reduces to one LP solve, a uniqueness verification, and one
extreme-ray rank check on x* - x0.  Uniqueness is never assumed: when
verification fails the verdict is NotUnique and no answer is attempted,
since the multi-optimum variant of the question is intractable in
general.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .circuits import is_circuit_direction
from .errors import LpInfeasibleError, LpUnboundedError
from .lp import LpInfeasible, LpOptimal, LpUnbounded, UniquenessReport, solve_lp, verify_unique
from .polyhedron import Point, Polyhedron, is_feasible
from .ratlin import RatVec


@dataclass(frozen=True)
class AlreadyOptimal:
    """x0 itself is the unique optimum (x* - x0 = 0)."""


@dataclass(frozen=True)
class CircuitNeighbor:
    xstar: Point


@dataclass(frozen=True)
class NotCircuitNeighbor:
    xstar: Point


@dataclass(frozen=True)
class NotUnique:
    report: UniquenessReport


OcnpVerdict = Union[AlreadyOptimal, CircuitNeighbor, NotCircuitNeighbor, NotUnique]


def decide_ocnp(P: Polyhedron, c: RatVec, x0: Point) -> OcnpVerdict:
    """Decide whether the unique optimum is one circuit step away from x0.

    x0 must be feasible and the LP bounded; an unbounded or infeasible LP
    raises a distinct error.  The verdict is invariant under positive
    scaling of c.
    """
    if not is_feasible(P, x0):
        raise ValueError("decide_ocnp requires a feasible starting point")
    outcome = solve_lp(P, c)
    if isinstance(outcome, LpUnbounded):
        raise LpUnboundedError("the LP is unbounded; no optimum exists")
    if isinstance(outcome, LpInfeasible):  # pragma: no cover - x0 is feasible
        raise LpInfeasibleError("the LP is infeasible")
    assert isinstance(outcome, LpOptimal)
    report = verify_unique(P, c, outcome.vertex)
    if not report.unique:
        return NotUnique(report)
    direction = outcome.vertex - x0
    if direction.is_zero():
        return AlreadyOptimal()
    if is_circuit_direction(P, direction):
        return CircuitNeighbor(outcome.vertex)
    return NotCircuitNeighbor(outcome.vertex)
