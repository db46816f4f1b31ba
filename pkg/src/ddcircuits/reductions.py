"""Hardness-style benchmark instances: circulation LPs from digraphs.

A digraph with arcs indexed 1..m gets perturbed arc costs 1 + 2^(-i),
which makes every simple cycle cost lie in [len, len + 1) and makes all
cycle costs (in fact all arc-subset costs) pairwise distinct while
preserving the by-arc-count ordering.  The circulation polytope
{x : Ax = 0, 0 <= x <= 1} over the node-arc incidence matrix, with the
negated perturbed costs as objective, is then a totally unimodular
0/1-LP with a unique optimum whose deepest-descent step from the zero
flow is exactly the unit flow along the maximum-cost directed cycle.
An exponential cycle-enumeration oracle certifies that correspondence
on desk-scale graphs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .circuits import DEFAULT_WORK_BUDGET
from .ddstep import DdStep, Optimal, exact_dd_step
from .errors import ParseError, SizeGuardExceeded
from .polyhedron import Instance, Point, Polyhedron
from .ratlin import Rat, RatMat, RatVec, parse_rat, vstack

MAX_ORACLE_NODES = 8


@dataclass(frozen=True)
class Digraph:
    """A directed graph with 1-indexed nodes and an ordered arc list.

    The arc order is significant: the cost perturbation depends on it, so
    relabeling arcs changes which cycle wins ties.  Parallel arcs are
    allowed (they get distinct indices); self-loops are rejected.
    """

    nodes: int
    arcs: tuple[tuple[int, int], ...]
    costs: Optional[tuple[Rat, ...]] = None

    def __post_init__(self):
        if self.nodes < 0:
            raise ValueError("node count must be nonnegative")
        for tail, head in self.arcs:
            if not (1 <= tail <= self.nodes and 1 <= head <= self.nodes):
                raise ValueError(f"arc ({tail}, {head}) leaves the node range 1..{self.nodes}")
            if tail == head:
                raise ValueError(f"self-loop at node {tail} is not allowed")
        if self.costs is not None and len(self.costs) != len(self.arcs):
            raise ValueError("cost vector length must equal the arc count")

    @property
    def m(self) -> int:
        return len(self.arcs)


def perturb_costs(G: Digraph) -> Digraph:
    """Endow an unweighted (or unit-cost) digraph with costs 1 + 2^(-i).

    The i-th arc (1-based) gets cost 1 + 2^(-i), so each cost has a
    denominator dividing 2^m, every cycle with k arcs costs between k
    (inclusive) and k + 1 (exclusive), distinct arc subsets always have
    distinct total costs, and a cycle with more arcs always costs more.
    """
    if G.costs is not None and any(c != 1 for c in G.costs):
        raise ValueError("perturb_costs requires an unweighted or unit-cost digraph")
    costs = tuple(Fraction(1) + Fraction(1, 2 ** i) for i in range(1, G.m + 1))
    return replace(G, costs=costs)


def incidence_matrix(G: Digraph) -> RatMat:
    """Node-arc incidence: +1 at the tail, -1 at the head of every arc."""
    zero = Fraction(0)
    rows = [[zero] * G.m for _ in range(G.nodes)]
    for j, (tail, head) in enumerate(G.arcs):
        rows[tail - 1][j] = Fraction(1)
        rows[head - 1][j] = Fraction(-1)
    return RatMat(rows, cols=G.m)


@dataclass(frozen=True)
class ReductionInstance:
    """A circulation LP built from a digraph, plus its zero starting flow."""

    instance: Instance
    x0: Point
    source: Digraph
    arc_index_map: tuple[tuple[int, int], ...]


def build_reduction(G: Digraph) -> ReductionInstance:
    """Circulation LP with perturbed negated costs over the unit-capacity network.

    Equalities: flow conservation A x = 0 over the incidence matrix;
    inequalities: the box 0 <= x <= 1 (B = [I; -I], d = (1...1, 0...0));
    objective: the negated perturbed costs; start: the zero flow.  The
    resulting system is pointed, totally unimodular, and has a unique
    optimum.
    """
    if G.m == 0:
        raise ValueError("the reduction needs at least one arc")
    weighted = perturb_costs(G)
    A = incidence_matrix(weighted)
    ident = RatMat.identity(G.m)
    B = vstack(ident, ident.scale_rows(-1))
    d = RatVec([Fraction(1)] * G.m + [Fraction(0)] * G.m)
    objective = RatVec(-c for c in weighted.costs)
    P = Polyhedron(A, RatVec.zeros(G.nodes), B, d)
    return ReductionInstance(
        Instance(P, objective), RatVec.zeros(G.m), weighted, weighted.arcs
    )


def longest_cycle_oracle(
    G: Digraph, *, max_nodes: int = MAX_ORACLE_NODES
) -> Optional[tuple[tuple[int, ...], Rat]]:
    """Exhaustive maximum-cost simple directed cycle, or None if acyclic.

    Enumerates every simple directed cycle (distinct nodes; with parallel
    or antiparallel arcs a two-node cycle needs two distinct arcs) and
    returns the best one as (sorted arc indices, total cost).  Ties break
    toward the lexicographically smallest arc set; with perturbed costs
    ties cannot occur.  Unweighted graphs count arcs.  The node guard
    keeps the enumeration at desk scale.
    """
    if G.nodes > max_nodes:
        raise SizeGuardExceeded(
            f"cycle oracle limited to {max_nodes} nodes, got {G.nodes}"
        )
    costs = G.costs if G.costs is not None else tuple(Fraction(1) for _ in G.arcs)
    by_tail: list[list[tuple[int, int]]] = [[] for _ in range(G.nodes + 1)]
    for idx, (tail, head) in enumerate(G.arcs):
        by_tail[tail].append((head, idx))

    best: Optional[tuple[Rat, tuple[int, ...]]] = None

    def consider(arc_indices: list[int]) -> None:
        nonlocal best
        cost = sum((costs[i] for i in arc_indices), Fraction(0))
        key = (cost, tuple(sorted(arc_indices)))
        if best is None or key[0] > best[0] or (key[0] == best[0] and key[1] < best[1]):
            best = key

    def walk(start: int, node: int, visited: set[int], path: list[int]) -> None:
        for head, idx in by_tail[node]:
            if head == start:
                consider(path + [idx])
            elif head > start and head not in visited:
                visited.add(head)
                walk(start, head, visited, path + [idx])
                visited.remove(head)

    for start in range(1, G.nodes + 1):
        walk(start, start, {start}, [])
    if best is None:
        return None
    return best[1], best[0]


def verify_correspondence(
    G: Digraph, *, work_budget: int = DEFAULT_WORK_BUDGET
) -> bool:
    """Does the exact dd-step from the zero flow match the longest cycle?

    Builds the reduction, takes the exact deepest-descent step from 0,
    and checks that its circuit is the 0/1 indicator of the oracle's
    maximum-cost cycle, the step length is 1, and the improvement equals
    the oracle's cycle cost.  Acyclic graphs pass vacuously (no step, no
    cycle).
    """
    if G.m == 0:
        return longest_cycle_oracle(G) is None
    reduction = build_reduction(G)
    P = reduction.instance.polyhedron
    c = reduction.instance.objective
    step = exact_dd_step(P, c, reduction.x0, work_budget=work_budget)
    oracle = longest_cycle_oracle(reduction.source)
    if isinstance(step, Optimal):
        return oracle is None
    if not isinstance(step, DdStep) or oracle is None:
        return False
    cycle_arcs, cycle_cost = oracle
    if step.alpha != 1:
        return False
    if any(e not in (0, 1) for e in step.g.entries):
        return False
    support = tuple(j for j, e in enumerate(step.g.entries) if e == 1)
    if support != cycle_arcs:
        return False
    return step.improvement == cycle_cost


# ---------------------------------------------------------------------------
# Graph file format: line 1 is "|V| m"; then m lines "tail head [cost]" with
# 1-indexed nodes and rational costs.  Blank lines and '#' comments are
# ignored.  Either every arc line carries a cost or none does.
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(line)]


def parse_digraph_text(text: str) -> Digraph:
    lines = [
        (no, line)
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty graph file", 1, 1)
    head_no, head_line = lines[0]
    head_toks = _tokens(head_line)
    if len(head_toks) != 2 or not all(tok.isdigit() for _, tok in head_toks):
        raise ParseError("header must be '|V| m' with nonnegative integers", head_no, 1)
    nodes = int(head_toks[0][1])
    m = int(head_toks[1][1])
    if len(lines) - 1 != m:
        raise ParseError(
            f"expected {m} arc lines, found {len(lines) - 1}",
            lines[-1][0] if len(lines) > 1 else head_no,
            1,
        )
    arcs: list[tuple[int, int]] = []
    costs: list[Fraction] = []
    has_costs: Optional[bool] = None
    for no, line in lines[1:]:
        toks = _tokens(line)
        if len(toks) not in (2, 3):
            raise ParseError("arc line must be 'tail head [cost]'", no, 1)
        for col, tok in toks[:2]:
            if not tok.isdigit():
                raise ParseError(f"malformed node index {tok!r}", no, col)
        line_has_cost = len(toks) == 3
        if has_costs is None:
            has_costs = line_has_cost
        elif has_costs != line_has_cost:
            raise ParseError("either every arc line has a cost or none does", no, 1)
        arcs.append((int(toks[0][1]), int(toks[1][1])))
        if line_has_cost:
            col, tok = toks[2]
            try:
                costs.append(parse_rat(tok))
            except ValueError as exc:
                raise ParseError(str(exc), no, col) from None
    try:
        return Digraph(nodes, tuple(arcs), tuple(costs) if has_costs else None)
    except ValueError as exc:
        raise ParseError(str(exc), head_no, 1) from None


def load_digraph(path) -> Digraph:
    with open(path, "r", encoding="ascii") as handle:
        return parse_digraph_text(handle.read())


def format_digraph(G: Digraph) -> str:
    out = [f"{G.nodes} {G.m}"]
    for j, (tail, head) in enumerate(G.arcs):
        if G.costs is not None:
            out.append(f"{tail} {head} {G.costs[j]}")
        else:
            out.append(f"{tail} {head}")
    return "\n".join(out) + "\n"
