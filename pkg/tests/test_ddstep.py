from fractions import Fraction

import pytest

from ddcircuits import (
    Circuit,
    DdStep,
    Digraph,
    IterationCapExceeded,
    LpOptimal,
    LpUnboundedError,
    Optimal,
    Polyhedron,
    RatVec,
    UnboundedImprovement,
    approx_dd_step,
    augment,
    build_reduction,
    enumerate_circuits,
    exact_dd_step,
    max_step,
    solve_lp,
    steepest_descent_step,
)
from ddcircuits.polyhedron import UNBOUNDED
from ddcircuits.ratlin import RatMat, rank

from instgen import mixed_instances

UNIT_SQUARE = Polyhedron.box([0, 0], [1, 1])
TRIANGLE = build_reduction(Digraph(3, ((1, 2), (2, 3), (3, 1)))).instance
TWO_TRIANGLES = build_reduction(
    Digraph(6, ((1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)))
).instance
HALF_LINE = Polyhedron(RatMat([], cols=1), RatVec([]), RatMat([[-1]]), RatVec([0]))


class TestExactStep:
    def test_triangle_from_zero(self):
        step = exact_dd_step(
            TRIANGLE.polyhedron, TRIANGLE.objective, RatVec([0, 0, 0])
        )
        assert step == DdStep(Circuit((1, 1, 1)), Fraction(1), Fraction(31, 8))

    def test_already_optimal(self):
        assert exact_dd_step(UNIT_SQUARE, RatVec([-1, -1]), RatVec([1, 1])) == Optimal()

    def test_picks_larger_improvement(self):
        step = exact_dd_step(UNIT_SQUARE, RatVec([-3, -1]), RatVec([0, 0]))
        assert step.g.entries == (1, 0)
        assert step.alpha == 1
        assert step.improvement == 3

    def test_unbounded_improvement(self):
        res = exact_dd_step(HALF_LINE, RatVec([-1]), RatVec([0]))
        assert isinstance(res, UnboundedImprovement)
        assert res.g.entries == (1,)

    def test_dominates_every_feasible_circuit_step(self):
        for P, c, x0 in mixed_instances(seed=2233, count=15):
            res = exact_dd_step(P, c, x0)
            best = res.improvement if isinstance(res, DdStep) else Fraction(0)
            for circ in enumerate_circuits(P):
                for g in (circ, -circ):
                    if c.dot(g.vec) >= 0:
                        continue
                    beta = max_step(P, x0, g.vec)
                    assert beta is not UNBOUNDED
                    assert best >= -beta * c.dot(g.vec)

    def test_infeasible_start_rejected(self):
        with pytest.raises(ValueError):
            exact_dd_step(UNIT_SQUARE, RatVec([-1, -1]), RatVec([2, 2]))


class TestApproxStep:
    def test_matches_exact_on_square(self):
        step = approx_dd_step(UNIT_SQUARE, RatVec([-3, -1]), RatVec([0, 0]))
        assert step.g.entries == (1, 0)
        assert step.alpha == 1
        assert step.improvement == 3

    def test_matches_exact_on_triangle(self):
        step = approx_dd_step(
            TRIANGLE.polyhedron, TRIANGLE.objective, RatVec([0, 0, 0])
        )
        assert (step.g.entries, step.alpha, step.improvement) == (
            (1, 1, 1),
            Fraction(1),
            Fraction(31, 8),
        )

    def test_optimal_start(self):
        assert approx_dd_step(UNIT_SQUARE, RatVec([-1, -1]), RatVec([1, 1])) == Optimal()

    def test_unbounded_lp_reported(self):
        with pytest.raises(LpUnboundedError):
            approx_dd_step(HALF_LINE, RatVec([-1]), RatVec([0]))

    def test_ratio_guarantee(self):
        for P, c, x0 in mixed_instances(seed=880, count=30):
            exact = exact_dd_step(P, c, x0)
            approx = approx_dd_step(P, c, x0)
            if isinstance(exact, Optimal):
                assert isinstance(approx, Optimal)
                continue
            factor = P.n - rank(P.A)
            assert isinstance(approx, DdStep)
            assert approx.improvement * factor >= exact.improvement

    def test_gap_bound(self):
        for P, c, x0 in mixed_instances(seed=881, count=30):
            exact = exact_dd_step(P, c, x0)
            out = solve_lp(P, c)
            assert isinstance(out, LpOptimal)
            gap = c.dot(x0) - out.value
            factor = P.n - rank(P.A)
            best = exact.improvement if isinstance(exact, DdStep) else Fraction(0)
            assert best * factor >= gap


class TestSteepestStep:
    def test_square(self):
        step = steepest_descent_step(UNIT_SQUARE, RatVec([-3, -1]), RatVec([0, 0]))
        assert step.g.entries == (1, 0)

    def test_optimal(self):
        res = steepest_descent_step(UNIT_SQUARE, RatVec([-1, -1]), RatVec([1, 1]))
        assert res == Optimal()

    def test_triangle(self):
        step = steepest_descent_step(
            TRIANGLE.polyhedron, TRIANGLE.objective, RatVec([0, 0, 0])
        )
        assert step.g.entries == (1, 1, 1)


class TestAugment:
    def test_square_two_steps(self):
        trace = augment(UNIT_SQUARE, RatVec([-3, -1]), RatVec([0, 0]), "exact")
        assert len(trace.steps) == 2
        assert trace.final == RatVec([1, 1])
        assert trace.iterates == (RatVec([0, 0]), RatVec([1, 0]), RatVec([1, 1]))

    def test_empty_trace_at_optimum(self):
        trace = augment(UNIT_SQUARE, RatVec([-3, -1]), RatVec([1, 1]), "exact")
        assert trace.steps == ()
        assert trace.iterates == (RatVec([1, 1]),)

    def test_two_cycles_larger_improvement_first(self):
        trace = augment(
            TWO_TRIANGLES.polyhedron, TWO_TRIANGLES.objective, RatVec.zeros(6), "exact"
        )
        assert [s.g.entries for s in trace.steps] == [
            (1, 1, 1, 0, 0, 0),
            (0, 0, 0, 1, 1, 1),
        ]
        assert [s.improvement for s in trace.steps] == [
            Fraction(31, 8),
            Fraction(199, 64),
        ]

    def test_approx_mode_reaches_optimum(self):
        c = RatVec([-3, -1])
        trace = augment(UNIT_SQUARE, c, RatVec([0, 0]), "approx")
        assert trace.final == RatVec([1, 1])

    def test_steepest_mode_reaches_optimum(self):
        c = RatVec([-3, -1])
        trace = augment(UNIT_SQUARE, c, RatVec([0, 0]), "steepest")
        assert trace.final == RatVec([1, 1])
        assert trace.mode == "steepest"

    def test_strict_decrease(self):
        c = TWO_TRIANGLES.objective
        trace = augment(TWO_TRIANGLES.polyhedron, c, RatVec.zeros(6), "exact")
        values = [c.dot(x) for x in trace.iterates]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_iteration_cap(self):
        with pytest.raises(IterationCapExceeded) as err:
            augment(UNIT_SQUARE, RatVec([-3, -1]), RatVec([0, 0]), "exact", max_iters=1)
        assert len(err.value.trace.steps) == 1

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            augment(UNIT_SQUARE, RatVec([-1, -1]), RatVec([0, 0]), "fastest")


def test_reduction_steps_are_unit_zero_one():
    # from the zero flow, every improving circuit of a circulation LP is a
    # 0/1 vector and its maximal step length is exactly 1
    for inst in (TRIANGLE, TWO_TRIANGLES):
        P, c = inst.polyhedron, inst.objective
        x0 = RatVec.zeros(P.n)
        for circ in enumerate_circuits(P):
            for g in (circ, -circ):
                if c.dot(g.vec) >= 0:
                    continue
                beta = max_step(P, x0, g.vec)
                if beta == 0:
                    continue
                assert beta == 1
                assert all(e in (0, 1) for e in g.entries)
