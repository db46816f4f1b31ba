"""Command-line front end with bit-exact, reproducible I/O.

One command per process, no network access, no configuration beyond an
optional work-budget override.  Data goes to stdout (or the requested
output file); diagnostics go to stderr.  Every number printed is a
rational string or an integer; floating point never appears.

Exit codes:
  0   success (for ``ocnp``: the optimum is a circuit neighbor)
  1   ``ocnp``: not a circuit neighbor / ``verify``: correspondence failed
  2   ``ocnp``: the starting point is already the unique optimum
  3   ``ocnp``: the LP optimum is not unique
  4   the LP is infeasible
  5   the LP (or the improvement) is unbounded
  64  usage error: malformed file, malformed point, bad dimensions
  65  the system is not pointed
  66  a size guard rejected the instance (work budget exceeded)
  70  the augmentation iteration cap was hit
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys

from .circuits import DEFAULT_WORK_BUDGET, enumerate_circuits
from .conformal import decompose, format_conformal
from .ddstep import DdStep, Optimal, UnboundedImprovement, approx_dd_step, augment, exact_dd_step
from .errors import (
    IterationCapExceeded,
    LpInfeasibleError,
    LpUnboundedError,
    NotPointedError,
    ParseError,
    SizeGuardExceeded,
)
from .lp import LpInfeasible, LpOptimal, LpUnbounded, solve_lp, verify_unique
from .ocnp import AlreadyOptimal, CircuitNeighbor, NotCircuitNeighbor, NotUnique, decide_ocnp
from .polyhedron import (
    Instance,
    format_instance,
    format_point,
    load_instance,
    parse_point_text,
)
from .ratlin import RatVec, rank
from .reductions import (
    build_reduction,
    format_digraph,
    load_digraph,
    longest_cycle_oracle,
    verify_correspondence,
    Digraph,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ALREADY_OPTIMAL = 2
EXIT_NOT_UNIQUE = 3
EXIT_INFEASIBLE = 4
EXIT_UNBOUNDED = 5
EXIT_USAGE = 64
EXIT_NOT_POINTED = 65
EXIT_SIZE_GUARD = 66
EXIT_ITERATION_CAP = 70


def _emit(args, doc: dict, lines: list[str]) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _load_point(value: str, n: int) -> RatVec:
    if value == "zeros":
        return RatVec.zeros(n)
    if os.path.exists(value):
        with open(value, "r", encoding="ascii") as handle:
            return parse_point_text(handle.read(), expected_dim=n)
    return parse_point_text(value, expected_dim=n)


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as handle:
            handle.write(text)


def cmd_solve(args) -> int:
    inst = load_instance(args.file)
    outcome = solve_lp(inst.polyhedron, inst.objective)
    if isinstance(outcome, LpInfeasible):
        _emit(args, {"status": "infeasible"}, ["status: infeasible"])
        return EXIT_INFEASIBLE
    if isinstance(outcome, LpUnbounded):
        doc = {"status": "unbounded", "direction": format_point(outcome.direction)}
        _emit(args, doc, ["status: unbounded", f"direction: {doc['direction']}"])
        return EXIT_UNBOUNDED
    report = verify_unique(inst.polyhedron, inst.objective, outcome.vertex)
    doc = {
        "status": "optimal",
        "x": format_point(outcome.vertex),
        "value": str(outcome.value),
        "unique": report.unique,
    }
    lines = [
        "status: optimal",
        f"x: {doc['x']}",
        f"value: {doc['value']}",
        f"unique: {'yes' if report.unique else 'no'}",
    ]
    if not report.unique:
        doc["witness"] = format_point(report.witness)
        lines.append(f"witness: {doc['witness']}")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_circuits(args) -> int:
    inst = load_instance(args.file)
    circuits = enumerate_circuits(inst.polyhedron, work_budget=args.work_budget)
    doc = {"circuits": [list(c.entries) for c in circuits]}
    _emit(args, doc, [c.to_text() for c in circuits])
    return EXIT_OK


def _step_result(args, res) -> int:
    if isinstance(res, Optimal):
        _emit(args, {"status": "optimal"}, ["status: optimal"])
        return EXIT_OK
    if isinstance(res, UnboundedImprovement):
        doc = {"status": "unbounded-improvement", "circuit": list(res.g.entries)}
        _emit(
            args,
            doc,
            ["status: unbounded-improvement", f"circuit: {res.g.to_text()}"],
        )
        return EXIT_UNBOUNDED
    assert isinstance(res, DdStep)
    doc = {
        "status": "step",
        "circuit": list(res.g.entries),
        "alpha": str(res.alpha),
        "improvement": str(res.improvement),
    }
    _emit(
        args,
        doc,
        [
            "status: step",
            f"circuit: {res.g.to_text()}",
            f"alpha: {res.alpha}",
            f"improvement: {res.improvement}",
        ],
    )
    return EXIT_OK


def cmd_ddstep(args) -> int:
    inst = load_instance(args.file)
    x0 = _load_point(args.from_point, inst.polyhedron.n)
    if args.mode == "exact":
        res = exact_dd_step(
            inst.polyhedron, inst.objective, x0, work_budget=args.work_budget
        )
    else:
        res = approx_dd_step(inst.polyhedron, inst.objective, x0)
    return _step_result(args, res)


def cmd_ocnp(args) -> int:
    inst = load_instance(args.file)
    x0 = _load_point(args.from_point, inst.polyhedron.n)
    verdict = decide_ocnp(inst.polyhedron, inst.objective, x0)
    if isinstance(verdict, CircuitNeighbor):
        doc = {"verdict": "circuit-neighbor", "xstar": format_point(verdict.xstar)}
        _emit(args, doc, ["verdict: circuit-neighbor", f"xstar: {doc['xstar']}"])
        return EXIT_OK
    if isinstance(verdict, NotCircuitNeighbor):
        doc = {"verdict": "not-circuit-neighbor", "xstar": format_point(verdict.xstar)}
        _emit(args, doc, ["verdict: not-circuit-neighbor", f"xstar: {doc['xstar']}"])
        return EXIT_FAIL
    if isinstance(verdict, AlreadyOptimal):
        _emit(args, {"verdict": "already-optimal"}, ["verdict: already-optimal"])
        return EXIT_ALREADY_OPTIMAL
    assert isinstance(verdict, NotUnique)
    doc = {"verdict": "not-unique"}
    lines = ["verdict: not-unique"]
    if verdict.report.witness is not None:
        doc["witness"] = format_point(verdict.report.witness)
        lines.append(f"witness: {doc['witness']}")
    _emit(args, doc, lines)
    return EXIT_NOT_UNIQUE


def cmd_decompose(args) -> int:
    inst = load_instance(args.file)
    n = inst.polyhedron.n
    start = _load_point(args.from_point, n)
    target = _load_point(args.to_point, n)
    total = decompose(inst.polyhedron, target - start)
    doc = {
        "terms": [
            {"alpha": str(alpha), "circuit": list(g.entries)} for alpha, g in total.terms
        ]
    }
    _emit(args, doc, format_conformal(total).splitlines())
    return EXIT_OK


def cmd_augment(args) -> int:
    inst = load_instance(args.file)
    x0 = _load_point(args.from_point, inst.polyhedron.n)
    trace = augment(
        inst.polyhedron,
        inst.objective,
        x0,
        args.mode,
        max_iters=args.max_iters,
        work_budget=args.work_budget,
    )
    if args.trace is not None:
        _write_text(args.trace, _trace_csv(inst, trace))
    final = trace.final
    doc = {
        "steps": len(trace.steps),
        "final": format_point(final),
        "objective": str(inst.objective.dot(final)),
        "trace": [
            {
                "iteration": i,
                "circuit": list(step.g.entries),
                "alpha": str(step.alpha),
                "improvement": str(step.improvement),
                "objective_after": str(inst.objective.dot(trace.iterates[i])),
            }
            for i, step in enumerate(trace.steps, start=1)
        ],
    }
    _emit(
        args,
        doc,
        [
            f"steps: {doc['steps']}",
            f"final: {doc['final']}",
            f"objective: {doc['objective']}",
        ],
    )
    return EXIT_OK


def _trace_csv(inst: Instance, trace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "circuit", "alpha", "improvement", "objective_after"])
    for i, step in enumerate(trace.steps, start=1):
        after = inst.objective.dot(trace.iterates[i])
        writer.writerow(
            [i, step.g.to_text(), str(step.alpha), str(step.improvement), str(after)]
        )
    return buf.getvalue()


def _instance_doc(inst: Instance) -> dict:
    P = inst.polyhedron
    return {
        "n": P.n,
        "m_A": P.A.m,
        "m_B": P.B.m,
        "A": [[str(e) for e in row] for row in P.A.entries],
        "b": [str(e) for e in P.b],
        "B": [[str(e) for e in row] for row in P.B.entries],
        "d": [str(e) for e in P.d],
        "c": [str(e) for e in inst.objective],
    }


def cmd_reduce(args) -> int:
    graph = load_digraph(args.file)
    reduction = build_reduction(graph)
    if args.format == "json":
        payload = json.dumps({"instance": _instance_doc(reduction.instance)}, sort_keys=True) + "\n"
    else:
        payload = format_instance(reduction.instance)
    _write_text(args.output, payload)
    return EXIT_OK


def cmd_longest_cycle(args) -> int:
    graph = load_digraph(args.file)
    result = longest_cycle_oracle(graph)
    if result is None:
        _emit(args, {"status": "no-cycle"}, ["no-cycle"])
        return EXIT_OK
    arcs, cost = result
    doc = {
        "status": "cycle",
        "arcs": [a + 1 for a in arcs],
        "cost": str(cost),
    }
    _emit(
        args,
        doc,
        [f"arcs: {' '.join(str(a + 1) for a in arcs)}", f"cost: {cost}"],
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    graph = load_digraph(args.file)
    ok = verify_correspondence(graph, work_budget=args.work_budget)
    _emit(
        args,
        {"correspondence": ok},
        [f"correspondence: {'ok' if ok else 'FAIL'}"],
    )
    return EXIT_OK if ok else EXIT_FAIL


def _random_digraph(rng: random.Random, nodes: int) -> Digraph:
    pairs = [(i, j) for i in range(1, nodes + 1) for j in range(1, nodes + 1) if i != j]
    upper = min(2 * nodes, len(pairs))
    m = rng.randint(min(nodes, upper), upper)
    arcs = tuple(rng.sample(pairs, m))
    return Digraph(nodes, arcs)


_BENCH_COLUMNS = (
    "graph_id",
    "|V|",
    "m",
    "exact_improvement",
    "approx_improvement",
    "ratio",
    "n_minus_rankA",
    "exact_iters",
    "approx_iters",
)


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    records = []
    for trial in range(args.trials):
        graph = _random_digraph(rng, args.nodes)
        reduction = build_reduction(graph)
        P = reduction.instance.polyhedron
        c = reduction.instance.objective
        x0 = reduction.x0
        exact = exact_dd_step(P, c, x0, work_budget=args.work_budget)
        approx = approx_dd_step(P, c, x0)
        exact_imp = exact.improvement if isinstance(exact, DdStep) else 0
        approx_imp = approx.improvement if isinstance(approx, DdStep) else 0
        ratio = "NA" if approx_imp == 0 else str(exact_imp / approx_imp)
        exact_iters = len(augment(P, c, x0, "exact", work_budget=args.work_budget).steps)
        approx_iters = len(augment(P, c, x0, "approx").steps)
        records.append(
            (
                f"g{args.seed}_{trial}",
                graph.nodes,
                graph.m,
                str(exact_imp),
                str(approx_imp),
                ratio,
                P.n - rank(P.A),
                exact_iters,
                approx_iters,
            )
        )
    if args.format == "json":
        rows = [dict(zip(_BENCH_COLUMNS, rec)) for rec in records]
        payload = json.dumps({"rows": rows}, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(_BENCH_COLUMNS))
        for rec in records:
            writer.writerow(list(rec))
        payload = buf.getvalue()
    _write_text(args.output, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddcircuits",
        description="Exact-rational circuit-step toolkit for pointed polyhedra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--format", choices=("text", "json"), default="text", help="output format"
        )
        p.add_argument(
            "--work-budget",
            type=int,
            default=_default_budget(),
            help="work budget for enumeration-backed oracles",
        )

    p = sub.add_parser("solve", help="solve the LP: optimum, value, uniqueness")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("circuits", help="enumerate all circuits (desk scale)")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(handler=cmd_circuits)

    p = sub.add_parser("ddstep", help="one deepest-descent step from a point")
    p.add_argument("file")
    p.add_argument("--from", dest="from_point", required=True, metavar="PT")
    p.add_argument("--mode", choices=("exact", "approx"), default="exact")
    add_common(p)
    p.set_defaults(handler=cmd_ddstep)

    p = sub.add_parser("ocnp", help="decide the optimal circuit-neighbor question")
    p.add_argument("file")
    p.add_argument("--from", dest="from_point", required=True, metavar="PT")
    add_common(p)
    p.set_defaults(handler=cmd_ocnp)

    p = sub.add_parser("decompose", help="conformal decomposition of (to - from)")
    p.add_argument("file")
    p.add_argument("--from", dest="from_point", required=True, metavar="PT")
    p.add_argument("--to", dest="to_point", required=True, metavar="PT")
    add_common(p)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("augment", help="iterate circuit steps to optimality")
    p.add_argument("file")
    p.add_argument("--from", dest="from_point", required=True, metavar="PT")
    p.add_argument("--mode", choices=("exact", "approx"), default="exact")
    p.add_argument("--trace", metavar="OUT.csv", help="write the step trace as CSV")
    p.add_argument("--max-iters", type=int, default=10_000)
    add_common(p)
    p.set_defaults(handler=cmd_augment)

    p = sub.add_parser("reduce", help="build the circulation LP of a digraph")
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-", metavar="FILE.lp")
    add_common(p)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("longest-cycle", help="maximum-cost simple directed cycle")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(handler=cmd_longest_cycle)

    p = sub.add_parser("verify", help="check the dd-step / longest-cycle match")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", help="random digraph benchmark, reproducible CSV")
    p.add_argument("--nodes", type=int, required=True, metavar="K")
    p.add_argument("--trials", type=int, required=True, metavar="T")
    p.add_argument("--seed", type=int, required=True, metavar="S")
    p.add_argument("-o", "--output", default="-", metavar="OUT.csv")
    add_common(p)
    p.set_defaults(handler=cmd_bench)

    return parser


def _default_budget() -> int:
    raw = os.environ.get("DDCIRCUITS_WORK_BUDGET")
    if raw is not None and raw.isdigit():
        return int(raw)
    return DEFAULT_WORK_BUDGET


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotPointedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_POINTED
    except SizeGuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD
    except LpInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except LpUnboundedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except IterationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ITERATION_CAP
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
