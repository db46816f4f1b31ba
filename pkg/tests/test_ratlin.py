from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ddcircuits.ratlin import (
    RatMat,
    RatVec,
    format_rat,
    kernel_basis,
    parse_rat,
    rank,
    solve,
    vstack,
)

# Node-arc incidence of the directed triangle 1->2->3->1 (+1 tail, -1 head).
TRIANGLE_INCIDENCE = RatMat(
    [
        [1, 0, -1],
        [-1, 1, 0],
        [0, -1, 1],
    ]
)


class TestRatParsing:
    def test_roundtrip(self):
        for text in ("3/2", "-3/2", "7", "-7", "0"):
            assert format_rat(parse_rat(text)) == text

    def test_lowest_terms(self):
        assert parse_rat("6/4") == Fraction(3, 2)
        assert format_rat(parse_rat("6/4")) == "3/2"

    @pytest.mark.parametrize("bad", ["+3", "3/-2", "3/0", "1.5", "x", "", "3 /2", "--3"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_rat(bad)


class TestRank:
    def test_identity(self):
        assert rank(RatMat.identity(2)) == 2

    def test_zero_matrix(self):
        assert rank(RatMat([[0] * 4 for _ in range(3)])) == 0

    def test_triangle_incidence(self):
        # incidence rank = nodes - weakly connected components = 3 - 1
        assert rank(TRIANGLE_INCIDENCE) == 2


class TestKernelBasis:
    def test_difference_row(self):
        basis = kernel_basis(RatMat([[1, -1]]))
        assert basis == [RatVec([1, 1])]

    def test_identity_trivial_kernel(self):
        assert kernel_basis(RatMat.identity(2)) == []

    def test_triangle_incidence(self):
        assert kernel_basis(TRIANGLE_INCIDENCE) == [RatVec([1, 1, 1])]

    def test_zero_rows_matrix(self):
        basis = kernel_basis(RatMat([], cols=2))
        assert basis == [RatVec([1, 0]), RatVec([0, 1])]

    def test_normalization(self):
        (vec,) = kernel_basis(RatMat([[Fraction(1, 2), Fraction(3, 4)]]))
        assert vec == RatVec([-3, 2]) or vec == RatVec([3, -2])
        # first nonzero entry positive
        first = next(e for e in vec if e != 0)
        assert first > 0


class TestSolve:
    def test_identity(self):
        x = solve(RatMat.identity(2), RatVec([Fraction(3, 2), -2]))
        assert x == RatVec([Fraction(3, 2), -2])

    def test_underdetermined_particular(self):
        x = solve(RatMat([[1, 1]]), RatVec([1]))
        assert x == RatVec([1, 0])

    def test_inconsistent(self):
        assert solve(RatMat([[1], [1]]), RatVec([0, 1])) is None

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve(RatMat([[1, 1]]), RatVec([1, 2]))


def _rationals():
    return st.fractions(
        min_value=-4, max_value=4, max_denominator=6
    )


def _matrices():
    return st.integers(1, 4).flatmap(
        lambda m: st.integers(1, 5).flatmap(
            lambda n: st.lists(
                st.lists(_rationals(), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            ).map(RatMat)
        )
    )


@given(_matrices())
def test_rank_nullity(M):
    assert rank(M) + len(kernel_basis(M)) == M.n


@given(_matrices())
def test_kernel_vectors_annihilated(M):
    for v in kernel_basis(M):
        assert M.matvec(v).is_zero()
        ints = [int(e) for e in v]
        assert all(e.denominator == 1 for e in v)
        first = next(e for e in ints if e != 0)
        assert first > 0


@given(_matrices(), st.data())
def test_solve_exact_when_solvable(M, data):
    target = RatVec(
        data.draw(st.lists(_rationals(), min_size=M.n, max_size=M.n))
    )
    rhs = M.matvec(target)
    x = solve(M, rhs)
    assert x is not None
    assert M.matvec(x) == rhs


@given(_matrices())
def test_deterministic(M):
    again = RatMat([list(r) for r in M.entries], cols=M.n)
    assert rank(M) == rank(again)
    assert kernel_basis(M) == kernel_basis(again)


def test_vstack_and_vector_algebra():
    a = RatMat([[1, 2]])
    b = RatMat([], cols=2)
    stacked = vstack(b, a)
    assert stacked.m == 1 and stacked.n == 2
    u = RatVec([1, Fraction(1, 2)])
    v = RatVec([-1, 2])
    assert u + v == RatVec([0, Fraction(5, 2)])
    assert u - v == RatVec([2, Fraction(-3, 2)])
    assert 2 * u == RatVec([2, 1])
    assert u.dot(v) == 0
    assert (-u).is_zero() is False
    assert RatVec.zeros(3).is_zero()
