"""Exact LP solving over pointed polyhedra: two-phase primal simplex.

Free variables are split into nonnegative positive and negative parts and
every inequality row receives a slack variable.  Both phases pivot under
the smallest-index anti-cycling rule (smallest eligible entering column;
ratio ties broken by smallest basic variable index), so the solver always
terminates and is fully deterministic.

The reported optimum is always a vertex of the *original* polyhedron.
A basic solution of the split formulation can project to a non-vertex
point (the split system has more vertices than the original one), so the
solver finishes with a purification walk: while the active rows at the
current optimum have rank below n, it moves along a kernel direction of
the active system until one more independent row becomes active.  Each
step keeps feasibility and the objective value, and raises the active
rank, so at most n steps reach a true vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import NotPointedError
from .polyhedron import UNBOUNDED, Point, Polyhedron, active_rows, is_feasible, max_step
from .ratlin import Rat, RatMat, RatVec, kernel_basis, vstack


@dataclass(frozen=True)
class LpOptimal:
    vertex: Point
    value: Rat


@dataclass(frozen=True)
class LpUnbounded:
    direction: RatVec


@dataclass(frozen=True)
class LpInfeasible:
    pass


LpOutcome = Union[LpOptimal, LpUnbounded, LpInfeasible]


@dataclass(frozen=True)
class UniquenessReport:
    """Whether the optimal face is a single point; a witness otherwise.

    When ``unique`` is false the witness is feasible, attains the same
    objective value, and differs from the optimum it was checked against.
    """

    unique: bool
    witness: Optional[Point]


def _pivot(rows, rhs, cost, basis, i, j):
    piv = rows[i][j]
    if piv != 1:
        inv = Fraction(1) / piv
        rows[i] = [a * inv for a in rows[i]]
        rhs[i] = rhs[i] * inv
    ri = rows[i]
    bi = rhs[i]
    for k in range(len(rows)):
        if k != i:
            f = rows[k][j]
            if f:
                rows[k] = [a - f * b for a, b in zip(rows[k], ri)]
                rhs[k] -= f * bi
    f = cost[j]
    if f:
        cost[:] = [a - f * b for a, b in zip(cost, ri)]
    basis[i] = j


def _reduce_cost_row(cost, rows, basis):
    for i, jb in enumerate(basis):
        f = cost[jb]
        if f:
            ri = rows[i]
            cost[:] = [a - f * b for a, b in zip(cost, ri)]


def _bland(rows, rhs, cost, basis, ncols):
    """Minimize; returns ('optimal', None) or ('unbounded', entering column)."""
    m = len(rows)
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            return "optimal", None
        leave = None
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                r = rhs[i] / a
                if best is None or r < best or (r == best and basis[i] < basis[leave]):
                    best = r
                    leave = i
        if leave is None:
            return "unbounded", enter
        _pivot(rows, rhs, cost, basis, leave, enter)


def _purify_to_vertex(P: Polyhedron, c: RatVec, x: Point) -> Point:
    """Walk within the optimal face until the active system has rank n."""
    for _ in range(P.n + P.B.m + 1):
        act = active_rows(P, x)
        stacked = vstack(P.A, P.B.take_rows(act))
        ker = kernel_basis(stacked)
        if not ker:
            return x
        w = ker[0]
        if c.dot(w) != 0:
            raise AssertionError(
                "purification direction changes the objective; solver invariant broken"
            )
        beta = max_step(P, x, w)
        if beta is UNBOUNDED:
            w = -w
            beta = max_step(P, x, w)
            if beta is UNBOUNDED:
                raise AssertionError("feasible line found in a pointed polyhedron")
        x = x + beta * w
    raise AssertionError("purification failed to reach a vertex")


def solve_lp(P: Polyhedron, c: RatVec) -> LpOutcome:
    """Minimize c over P exactly.

    Returns an optimal vertex with its value, a certified unbounded
    improving ray (Ar = 0, Br <= 0, c.r < 0), or infeasibility.  The
    polyhedron must be pointed.
    """
    if not P.pointed:
        raise NotPointedError("solve_lp requires a pointed polyhedron")
    if c.dim != P.n:
        raise ValueError(f"objective has dimension {c.dim}, expected {P.n}")
    n, m_b = P.n, P.B.m
    ncols = 2 * n + m_b
    zero = Fraction(0)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(P.A.m):
        arow = P.A.entries[i]
        rows.append(list(arow) + [-a for a in arow] + [zero] * m_b)
        rhs.append(P.b[i])
    for i in range(m_b):
        brow = P.B.entries[i]
        row = list(brow) + [-a for a in brow] + [zero] * m_b
        row[2 * n + i] = Fraction(1)
        rows.append(row)
        rhs.append(P.d[i])

    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]

    # Phase 1: artificial basis, minimize the sum of artificials.
    for i in range(m):
        rows[i] = rows[i] + [Fraction(1) if k == i else zero for k in range(m)]
    basis = [ncols + i for i in range(m)]
    cost = [zero] * ncols + [Fraction(1)] * m
    _reduce_cost_row(cost, rows, basis)
    status, _ = _bland(rows, rhs, cost, basis, ncols)
    if status != "optimal":  # pragma: no cover - phase 1 is bounded below by 0
        raise AssertionError("phase-1 objective reported unbounded")
    residue = sum((rhs[i] for i in range(m) if basis[i] >= ncols), zero)
    if residue > 0:
        return LpInfeasible()

    # Drive artificials out of the basis; rows they cannot leave are redundant.
    keep = []
    for i in range(m):
        if basis[i] >= ncols:
            j = next((j for j in range(ncols) if rows[i][j] != 0), None)
            if j is None:
                continue
            _pivot(rows, rhs, cost, basis, i, j)
        keep.append(i)
    rows = [rows[i][:ncols] for i in keep]
    rhs = [rhs[i] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2: the real objective over the split variables.
    cost = list(c.entries) + [-a for a in c.entries] + [zero] * m_b
    _reduce_cost_row(cost, rows, basis)
    status, enter = _bland(rows, rhs, cost, basis, ncols)
    if status == "unbounded":
        ray = [zero] * ncols
        ray[enter] = Fraction(1)
        for i, jb in enumerate(basis):
            ray[jb] = -rows[i][enter]
        direction = RatVec(ray[j] - ray[n + j] for j in range(n))
        return LpUnbounded(direction)

    w = [zero] * ncols
    for i, jb in enumerate(basis):
        w[jb] = rhs[i]
    x = RatVec(w[j] - w[n + j] for j in range(n))
    x = _purify_to_vertex(P, c, x)
    return LpOptimal(x, c.dot(x))


def verify_unique(P: Polyhedron, c: RatVec, xstar: Point) -> UniquenessReport:
    """Decide whether xstar is the only optimum of min c over P.

    The optimal face {x in P : c.x = c.xstar} is probed by minimizing and
    maximizing every coordinate over it (2n auxiliary LPs); the face is a
    single point exactly when all 2n extremes coincide with xstar.  An
    unbounded probe direction also certifies non-uniqueness.  Passing a
    non-optimal xstar is a usage error.
    """
    if not is_feasible(P, xstar):
        raise ValueError("xstar is not feasible")
    base = solve_lp(P, c)
    if not isinstance(base, LpOptimal):
        raise ValueError("xstar cannot be optimal: the LP has no optimum")
    if base.value != c.dot(xstar):
        raise ValueError("xstar is not optimal for the given objective")

    face = Polyhedron(
        vstack(P.A, RatMat([c.entries], cols=P.n)),
        P.b.concat(RatVec([base.value])),
        P.B,
        P.d,
    )
    for i in range(P.n):
        unit = [Fraction(0)] * P.n
        unit[i] = Fraction(1)
        for obj, target in ((RatVec(unit), xstar[i]), (-RatVec(unit), -xstar[i])):
            probe = solve_lp(face, obj)
            if isinstance(probe, LpUnbounded):
                return UniquenessReport(False, xstar + probe.direction)
            assert isinstance(probe, LpOptimal)
            if probe.value != target:
                return UniquenessReport(False, probe.vertex)
    return UniquenessReport(True, None)
