"""Circuits of a constraint pair (A, B) and the sign-split cone behind them.

A circuit is a nonzero kernel vector of A, scaled to coprime integers,
whose image under B has inclusion-minimal support among all nonzero
kernel images.  Over a pointed system these directions are exactly the
potential edge directions of the polyhedron family with fixed A and B.

Recognition works through a lifted cone in dimension n + 2*m_B: a vector
v with Av = 0 lifts to (v, y+, y-) where y+ and y- split Bv into its
positive and negative parts.  The lift lies on a one-dimensional face of
the cone (an extreme ray) exactly when the constraints active at it have
rank n + 2*m_B - 1, and for v != 0 such extreme rays are precisely the
circuit directions.

Enumeration is a deliberately exponential desk-scale oracle: a nonzero
kernel vector g is a circuit exactly when the rows of B vanishing on g,
stacked on A, have rank n - 1.  It therefore suffices to scan subsets of
rows of B of size n - 1 - rank(A) that are independent modulo the row
space of A, collect the one-dimensional kernels, and deduplicate by
canonical sign (first nonzero entry of Bg positive).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotPointedError, SizeGuardExceeded
from .polyhedron import Polyhedron
from .ratlin import (
    RatMat,
    RatVec,
    coprime_integer_entries,
    kernel_basis,
    rank,
    sign_normalized,
    vstack,
)

DEFAULT_WORK_BUDGET = 500_000


@dataclass(frozen=True)
class Circuit:
    """A coprime-integer kernel direction with support-minimal B-image.

    ``entries`` may carry either orientation; g and -g describe the same
    circuit.  Enumeration returns the canonical representative (first
    nonzero entry of Bg positive).
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries or all(e == 0 for e in self.entries):
            raise ValueError("a circuit must be a nonzero vector")
        if any(not isinstance(e, int) for e in self.entries):
            raise ValueError("circuit entries must be integers")
        g = 0
        for e in self.entries:
            g = gcd(g, abs(e))
        if g != 1:
            raise ValueError("circuit entries must be coprime")

    @property
    def vec(self) -> RatVec:
        return RatVec(self.entries)

    @property
    def l1(self) -> int:
        return sum(abs(e) for e in self.entries)

    def __neg__(self) -> "Circuit":
        return Circuit(tuple(-e for e in self.entries))

    def to_text(self) -> str:
        return " ".join(str(e) for e in self.entries)


def circuit_from_vector(v: RatVec) -> Circuit:
    """Scale a rational direction to coprime integers, keeping orientation."""
    return Circuit(coprime_integer_entries(v.entries))


@dataclass(frozen=True)
class ConeLift:
    """A member (x, y+, y-) of the sign-split cone of (A, B).

    The canonical lift has disjoint supports, min(y+_i, y-_i) = 0 for all
    i; arbitrary members (for instance y+_i = y-_i = 1, the trivial
    non-circuit rays) are representable too.
    """

    x: RatVec
    yplus: RatVec
    yminus: RatVec

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.yplus.is_zero() and self.yminus.is_zero()


def lift(P: Polyhedron, v: RatVec) -> ConeLift:
    """Canonical lift of a kernel vector: split Bv into positive and negative parts."""
    if v.dim != P.n:
        raise ValueError(f"vector has dimension {v.dim}, expected {P.n}")
    if not P.A.matvec(v).is_zero():
        raise ValueError("lift requires A v = 0")
    bv = P.B.matvec(v)
    zero = Fraction(0)
    yplus = RatVec(max(e, zero) for e in bv)
    yminus = RatVec(max(-e, zero) for e in bv)
    return ConeLift(v, yplus, yminus)


def is_extreme_ray(P: Polyhedron, L: ConeLift) -> bool:
    """Rank test: does L span a one-dimensional face of the sign-split cone?

    The cone lives in dimension N = n + 2*m_B with constraints Ax = 0,
    Bx - y+ + y- = 0, y+ >= 0, y- >= 0.  L is an extreme ray exactly when
    the rows active at L have rank N - 1.  Zero lifts and non-members are
    usage errors.
    """
    n, m_b = P.n, P.B.m
    if L.x.dim != n or L.yplus.dim != m_b or L.yminus.dim != m_b:
        raise ValueError("lift dimensions do not match the polyhedron")
    if L.is_zero():
        raise ValueError("the zero lift spans no ray")
    if any(e < 0 for e in L.yplus) or any(e < 0 for e in L.yminus):
        raise ValueError("lift is not a cone member: negative split part")
    if not P.A.matvec(L.x).is_zero():
        raise ValueError("lift is not a cone member: A x != 0")
    if P.B.matvec(L.x) != L.yplus - L.yminus:
        raise ValueError("lift is not a cone member: B x != y+ - y-")

    total = n + 2 * m_b
    zero = Fraction(0)
    one = Fraction(1)
    rows: list[list[Fraction]] = []
    for arow in P.A.entries:
        rows.append(list(arow) + [zero] * (2 * m_b))
    for i in range(m_b):
        row = list(P.B.entries[i]) + [zero] * (2 * m_b)
        row[n + i] = -one
        row[n + m_b + i] = one
        rows.append(row)
    for i in range(m_b):
        if L.yplus[i] == 0:
            row = [zero] * total
            row[n + i] = one
            rows.append(row)
        if L.yminus[i] == 0:
            row = [zero] * total
            row[n + m_b + i] = one
            rows.append(row)
    return rank(RatMat(rows, cols=total)) == total - 1


def is_circuit_direction(P: Polyhedron, v: RatVec) -> bool:
    """True iff v is a positive multiple of a circuit of (A, B).

    False for the zero vector and for vectors outside ker(A); otherwise
    decided by the extreme-ray rank test on the canonical lift.  The
    verdict is invariant under positive scaling of v.
    """
    if v.dim != P.n:
        raise ValueError(f"vector has dimension {v.dim}, expected {P.n}")
    if v.is_zero():
        return False
    if not P.A.matvec(v).is_zero():
        return False
    return is_extreme_ray(P, lift(P, v))


def canonical_orientation(P: Polyhedron, circ: Circuit) -> Circuit:
    """Flip the sign so the first nonzero entry of B g is positive."""
    bg = P.B.matvec(circ.vec)
    for e in bg:
        if e > 0:
            return circ
        if e < 0:
            return -circ
    raise AssertionError("kernel direction with zero B-image in a pointed system")


class _Echelon:
    """Row-space tracker supporting cheap does-this-row-extend-the-rank tests."""

    __slots__ = ("rows",)

    def __init__(self, rows=None):
        self.rows: list[tuple[int, tuple[Fraction, ...]]] = rows if rows is not None else []

    def _reduce(self, vec: list[Fraction]) -> list[Fraction]:
        for lead, row in self.rows:
            f = vec[lead]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def try_add(self, vec: list[Fraction]):
        """New tracker with the row added, or None if it is dependent."""
        reduced = self._reduce(vec)
        lead = next((i for i, a in enumerate(reduced) if a != 0), None)
        if lead is None:
            return None
        piv = reduced[lead]
        normalized = tuple(a / piv for a in reduced)
        return _Echelon(self.rows + [(lead, normalized)])


def enumerate_circuits(
    P: Polyhedron, *, work_budget: int = DEFAULT_WORK_BUDGET
) -> list[Circuit]:
    """All circuits of (A, B), one canonical representative per +/- pair.

    Intended for desk-scale systems: the subset scan is exponential, and
    a configurable work budget aborts runs that would exceed it.  Rows of
    B that are scalar multiples of each other induce the same vanishing
    constraint, so only one representative per parallel class is scanned;
    this loses no circuits.  The result is sorted lexicographically by
    entries.
    """
    if not P.pointed:
        raise NotPointedError("circuit enumeration requires a pointed polyhedron")
    n = P.n

    base = _Echelon()
    for arow in P.A.entries:
        ext = base.try_add(list(arow))
        if ext is not None:
            base = ext
    rank_a = len(base.rows)
    k = n - 1 - rank_a
    if k < 0:
        return []

    reps: list[int] = []
    seen: set[tuple[int, ...]] = set()
    for i in range(P.B.m):
        row = P.B.entries[i]
        if all(a == 0 for a in row):
            continue
        key = sign_normalized(coprime_integer_entries(row))
        if key not in seen:
            seen.add(key)
            reps.append(i)

    found: dict[tuple[int, ...], Circuit] = {}
    budget = [work_budget]

    def charge() -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise SizeGuardExceeded(
                f"circuit enumeration exceeded its work budget of {work_budget} "
                f"nodes (n={n}, m_B={P.B.m})"
            )

    def emit(chosen: list[int]) -> None:
        charge()
        stacked = vstack(P.A, P.B.take_rows(chosen))
        ker = kernel_basis(stacked)
        if len(ker) != 1:  # pragma: no cover - rank is n-1 by construction
            raise AssertionError("expected a one-dimensional kernel")
        circ = canonical_orientation(P, circuit_from_vector(ker[0]))
        found.setdefault(circ.entries, circ)

    def scan(start: int, state: _Echelon, chosen: list[int]) -> None:
        charge()
        if len(chosen) == k:
            emit(chosen)
            return
        need = k - len(chosen)
        for pos in range(start, len(reps) - need + 1):
            idx = reps[pos]
            ext = state.try_add(list(P.B.entries[idx]))
            if ext is not None:
                scan(pos + 1, ext, chosen + [idx])

    if k == 0:
        if rank_a == n - 1:
            emit([])
    else:
        scan(0, base, [])
    return [found[key] for key in sorted(found)]
