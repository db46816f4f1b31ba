"""Deepest-descent circuit steps: exact oracle, dimension-factor
approximation, steepest-descent comparator, and the augmentation loop.

The exact step scans every circuit in both orientations (a desk-scale,
enumeration-backed oracle) and keeps the feasible step maximizing the
improvement -c.(alpha g).  The approximate step never enumerates: it
solves the LP once, conformally decomposes x* - x0, picks the term with
the best objective contribution and extends it to its maximal feasible
length, which guarantees at least 1/(n - rank A) of the exact
improvement.  The steepest-descent comparator minimizes c.g / |g|_1 and
carries no approximation claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .circuits import Circuit, enumerate_circuits, DEFAULT_WORK_BUDGET
from .conformal import decompose
from .errors import IterationCapExceeded, LpInfeasibleError, LpUnboundedError
from .lp import LpInfeasible, LpOptimal, LpUnbounded, solve_lp
from .polyhedron import UNBOUNDED, Point, Polyhedron, is_feasible, max_step
from .ratlin import Rat, RatVec


@dataclass(frozen=True)
class DdStep:
    """A feasible improving circuit step taken at maximal length.

    ``g`` is the direction actually stepped (c.g < 0), which may be the
    negation of the canonical enumeration representative.
    """

    g: Circuit
    alpha: Rat
    improvement: Rat


@dataclass(frozen=True)
class Optimal:
    """No feasible improving circuit step exists from the query point."""


@dataclass(frozen=True)
class UnboundedImprovement:
    """An improving circuit with no finite maximal step length."""

    g: Circuit


StepOutcome = Union[DdStep, Optimal, UnboundedImprovement]


def exact_dd_step(
    P: Polyhedron,
    c: RatVec,
    x0: Point,
    *,
    circuits: Optional[list[Circuit]] = None,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> StepOutcome:
    """The deepest-descent step from x0, by exhaustive circuit scan.

    Among all circuits g (either orientation) with c.g < 0 and a positive
    maximal feasible step, returns the one whose improvement -c.(alpha g)
    is largest; ties go to the earliest circuit in canonical order, with
    the canonical orientation tried before its negation.  Returns Optimal
    when no improving feasible circuit exists and UnboundedImprovement as
    soon as an improving circuit has no finite step length.
    """
    if not is_feasible(P, x0):
        raise ValueError("exact_dd_step requires a feasible starting point")
    if circuits is None:
        circuits = enumerate_circuits(P, work_budget=work_budget)
    best: Optional[DdStep] = None
    for canonical in circuits:
        for g in (canonical, -canonical):
            slope = c.dot(g.vec)
            if slope >= 0:
                continue
            beta = max_step(P, x0, g.vec)
            if beta is UNBOUNDED:
                return UnboundedImprovement(g)
            if beta == 0:
                continue
            improvement = -beta * slope
            if best is None or improvement > best.improvement:
                best = DdStep(g, beta, improvement)
    return best if best is not None else Optimal()


def approx_dd_step(P: Polyhedron, c: RatVec, x0: Point) -> Union[DdStep, Optimal]:
    """Dimension-factor approximate deepest-descent step (no enumeration).

    Solves the LP, conformally decomposes x* - x0, picks the term with
    the smallest c.(alpha g) and extends it to the maximal feasible step.
    The improvement is at least 1/(n - rank A) of the exact deepest
    descent improvement.  An unbounded or infeasible LP is reported as a
    distinct error.
    """
    if not is_feasible(P, x0):
        raise ValueError("approx_dd_step requires a feasible starting point")
    outcome = solve_lp(P, c)
    if isinstance(outcome, LpUnbounded):
        raise LpUnboundedError("the LP is unbounded; no deepest-descent step exists")
    if isinstance(outcome, LpInfeasible):  # pragma: no cover - x0 is feasible
        raise LpInfeasibleError("the LP is infeasible")
    assert isinstance(outcome, LpOptimal)
    z = outcome.vertex - x0
    if z.is_zero():
        return Optimal()
    total = decompose(P, z)
    best_term = min(total.terms, key=lambda term: c.dot(term[0] * term[1].vec))
    alpha, g = best_term
    if c.dot(alpha * g.vec) >= 0:
        # x0 is already optimal (possible only with multiple optima).
        return Optimal()
    beta = max_step(P, x0, g.vec)
    if beta is UNBOUNDED:  # pragma: no cover - would contradict a bounded LP
        raise AssertionError("unbounded improving step under a bounded LP")
    return DdStep(g, beta, -beta * c.dot(g.vec))


def steepest_descent_step(
    P: Polyhedron,
    c: RatVec,
    x0: Point,
    *,
    circuits: Optional[list[Circuit]] = None,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> StepOutcome:
    """Benchmark comparator: minimize c.g / |g|_1, then step maximally.

    Only circuits with c.g < 0 and a positive feasible step are
    considered; ties go to canonical order.  Enumeration-backed, desk
    scale only, no approximation guarantee.
    """
    if not is_feasible(P, x0):
        raise ValueError("steepest_descent_step requires a feasible starting point")
    if circuits is None:
        circuits = enumerate_circuits(P, work_budget=work_budget)
    best = None
    best_ratio = None
    for canonical in circuits:
        for g in (canonical, -canonical):
            slope = c.dot(g.vec)
            if slope >= 0:
                continue
            beta = max_step(P, x0, g.vec)
            if beta is UNBOUNDED:
                return UnboundedImprovement(g)
            if beta == 0:
                continue
            ratio = slope / Fraction(g.l1)
            if best_ratio is None or ratio < best_ratio:
                best_ratio = ratio
                best = DdStep(g, beta, -beta * slope)
    return best if best is not None else Optimal()


@dataclass(frozen=True)
class AugmentationTrace:
    """The steps and iterates of one augmentation run.

    The objective strictly decreases along ``iterates`` and, when the run
    terminated normally, the final iterate is optimal.
    """

    steps: tuple[DdStep, ...]
    iterates: tuple[Point, ...]
    mode: str

    @property
    def final(self) -> Point:
        return self.iterates[-1]


_STEP_RULES = ("exact", "approx", "steepest")


def augment(
    P: Polyhedron,
    c: RatVec,
    x0: Point,
    mode: str = "exact",
    *,
    max_iters: int = 10_000,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> AugmentationTrace:
    """Iterate the selected step rule from x0 until no step improves.

    Records every step and every iterate (the first iterate is x0, so a
    run from an optimal point has an empty step list).  Raises
    IterationCapExceeded with the partial trace attached if the cap is
    hit, and LpUnboundedError if an unbounded improving direction shows
    up.
    """
    if mode not in _STEP_RULES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {_STEP_RULES}")
    if not is_feasible(P, x0):
        raise ValueError("augment requires a feasible starting point")
    circuits = (
        enumerate_circuits(P, work_budget=work_budget) if mode != "approx" else None
    )
    steps: list[DdStep] = []
    iterates: list[Point] = [x0]
    x = x0
    for _ in range(max_iters):
        if mode == "exact":
            res = exact_dd_step(P, c, x, circuits=circuits)
        elif mode == "steepest":
            res = steepest_descent_step(P, c, x, circuits=circuits)
        else:
            res = approx_dd_step(P, c, x)
        if isinstance(res, Optimal):
            return AugmentationTrace(tuple(steps), tuple(iterates), mode)
        if isinstance(res, UnboundedImprovement):
            raise LpUnboundedError("improving circuit with unbounded step length")
        new_x = x + res.alpha * res.g.vec
        if c.dot(new_x) >= c.dot(x):  # pragma: no cover - steps always improve
            raise AssertionError("augmentation step failed to decrease the objective")
        steps.append(res)
        iterates.append(new_x)
        x = new_x
    raise IterationCapExceeded(
        f"augmentation did not converge within {max_iters} iterations",
        AugmentationTrace(tuple(steps), tuple(iterates), mode),
    )
