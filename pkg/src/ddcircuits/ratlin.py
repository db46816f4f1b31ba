"""Exact rational linear algebra: vectors, matrices, rank, kernels, solving.

Scalars are arbitrary-precision rationals (``fractions.Fraction``,
re-exported as ``Rat``): always stored in lowest terms with a positive
denominator, so arithmetic never rounds.  Vectors and matrices are
immutable and hashable.  Elimination always pivots on the first nonzero
entry in column order, which makes every operation deterministic:
identical inputs yield bit-identical outputs.  Nothing in this module
touches floating point, and no tolerance parameter exists.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Optional, Sequence

Rat = Fraction

_RAT_RE = re.compile(r"-?\d+(?:/\d+)?")


def parse_rat(token: str) -> Rat:
    """Parse ``p/q`` (or ``p``) with an optional leading minus on p only."""
    if not _RAT_RE.fullmatch(token):
        raise ValueError(f"malformed rational {token!r}")
    if "/" in token:
        p, q = token.split("/")
        if int(q) == 0:
            raise ValueError(f"zero denominator in {token!r}")
        return Fraction(int(p), int(q))
    return Fraction(int(token))


def format_rat(value: Rat) -> str:
    """ASCII form ``p/q``, or ``p`` when the denominator is 1."""
    return str(value)


class RatVec:
    """Immutable exact-rational vector; equality is entrywise and exact."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Rat | int]):
        self.entries: tuple[Fraction, ...] = tuple(Fraction(e) for e in entries)

    @classmethod
    def zeros(cls, dim: int) -> "RatVec":
        return cls([Fraction(0)] * dim)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RatVec) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __add__(self, other: "RatVec") -> "RatVec":
        self._check_dim(other)
        return RatVec(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RatVec") -> "RatVec":
        self._check_dim(other)
        return RatVec(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RatVec":
        return RatVec(-a for a in self.entries)

    def __mul__(self, scalar) -> "RatVec":
        s = Fraction(scalar)
        return RatVec(a * s for a in self.entries)

    __rmul__ = __mul__

    def dot(self, other: "RatVec") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.entries) if a != 0)

    def concat(self, other: "RatVec") -> "RatVec":
        return RatVec(self.entries + other.entries)

    def to_text(self) -> str:
        return " ".join(str(a) for a in self.entries)

    def _check_dim(self, other: "RatVec") -> None:
        if len(self.entries) != len(other.entries):
            raise ValueError(
                f"dimension mismatch: {len(self.entries)} vs {len(other.entries)}"
            )

    def __repr__(self) -> str:
        return f"RatVec([{', '.join(str(a) for a in self.entries)}])"


class RatMat:
    """Immutable exact-rational matrix, stored row-major.

    A matrix may have zero rows; the column count must then be given
    explicitly, since it cannot be inferred.
    """

    __slots__ = ("entries", "n")

    def __init__(self, rows: Iterable[Iterable[Rat | int]], cols: Optional[int] = None):
        entries = tuple(tuple(Fraction(e) for e in row) for row in rows)
        if cols is None:
            if not entries:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise ValueError(f"ragged row: expected {cols} entries, got {len(row)}")
        self.entries = entries
        self.n = cols

    @classmethod
    def identity(cls, k: int) -> "RatMat":
        return cls(
            [[Fraction(1) if i == j else Fraction(0) for j in range(k)] for i in range(k)],
            cols=k,
        )

    @property
    def m(self) -> int:
        return len(self.entries)

    def row(self, i: int) -> RatVec:
        return RatVec(self.entries[i])

    def iter_rows(self) -> Iterator[RatVec]:
        for row in self.entries:
            yield RatVec(row)

    def matvec(self, v: RatVec) -> RatVec:
        if v.dim != self.n:
            raise ValueError(f"dimension mismatch: matrix has {self.n} columns, vector {v.dim}")
        ve = v.entries
        return RatVec(
            sum((a * b for a, b in zip(row, ve)), Fraction(0)) for row in self.entries
        )

    def take_rows(self, indices: Sequence[int]) -> "RatMat":
        return RatMat([self.entries[i] for i in indices], cols=self.n)

    def transpose(self) -> "RatMat":
        return RatMat(
            [[self.entries[i][j] for i in range(self.m)] for j in range(self.n)],
            cols=self.m,
        )

    def scale_rows(self, factor) -> "RatMat":
        f = Fraction(factor)
        return RatMat([[a * f for a in row] for row in self.entries], cols=self.n)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RatMat)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.entries, self.n))

    def __repr__(self) -> str:
        return f"RatMat({self.m}x{self.n})"


def vstack(*mats: RatMat) -> RatMat:
    """Stack matrices vertically; all must agree on the column count."""
    if not mats:
        raise ValueError("vstack needs at least one matrix")
    cols = mats[0].n
    rows: list[tuple[Fraction, ...]] = []
    for mat in mats:
        if mat.n != cols:
            raise ValueError(f"column mismatch: {mat.n} vs {cols}")
        rows.extend(mat.entries)
    return RatMat(rows, cols=cols)


def _rref(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place reduced row echelon form; returns the pivot column list."""
    m = len(rows)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][col]
        if piv != 1:
            rows[r] = [a / piv for a in rows[r]]
        rr = rows[r]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rr)]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return pivots


def rank(M: RatMat) -> int:
    """Dimension of the row space, by exact rational elimination."""
    rows = [list(row) for row in M.entries]
    return len(_rref(rows, M.n))


def coprime_integer_entries(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, preserving orientation."""
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in values]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    if g > 1:
        ints = [a // g for a in ints]
    return tuple(ints)


def sign_normalized(ints: Sequence[int]) -> tuple[int, ...]:
    """Flip the sign so the first nonzero entry is positive."""
    for a in ints:
        if a > 0:
            return tuple(ints)
        if a < 0:
            return tuple(-b for b in ints)
    return tuple(ints)


def kernel_basis(M: RatMat) -> list[RatVec]:
    """Basis of the null space of M, one vector per free column.

    Each basis vector is scaled to coprime integer entries with its first
    nonzero entry positive, so equal kernels produce equal bases.  An
    empty list means the kernel is trivial.
    """
    rows = [list(row) for row in M.entries]
    pivots = _rref(rows, M.n)
    pivot_set = set(pivots)
    basis: list[RatVec] = []
    for free in range(M.n):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * M.n
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][free]
        basis.append(RatVec(sign_normalized(coprime_integer_entries(vec))))
    return basis


def solve(M: RatMat, rhs: RatVec) -> Optional[RatVec]:
    """One exact solution of M x = rhs, or None when the system is inconsistent.

    Free variables are set to zero, so the particular solution is the one
    elimination produces.
    """
    if rhs.dim != M.m:
        raise ValueError(f"right-hand side has {rhs.dim} entries, matrix has {M.m} rows")
    rows = [list(row) + [b] for row, b in zip(M.entries, rhs.entries)]
    if not rows:
        return RatVec.zeros(M.n)
    pivots = _rref(rows, M.n + 1)
    if pivots and pivots[-1] == M.n:
        return None
    x = [Fraction(0)] * M.n
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][M.n]
    return RatVec(x)
