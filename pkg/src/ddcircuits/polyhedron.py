"""Pointed polyhedra ``{x : Ax = b, Bx <= d}`` over exact rationals.

Membership, active inequality rows, and maximal feasible step lengths are
all decided by exact comparison; there is no tolerance parameter anywhere
in this module.  The module also owns the line-oriented instance file
format (constraint system plus objective) and the one-line point format,
both of which round-trip exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import NotPointedError, ParseError
from .ratlin import Rat, RatMat, RatVec, parse_rat, rank, vstack


class _Unbounded:
    """Sentinel for a step no inequality row limits."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()

# A point is just an exact-rational vector; the alias documents intent in
# signatures where feasibility matters.
Point = RatVec


class Polyhedron:
    """The system (A, b, B, d) in n variables.

    Pointedness (rank of A stacked on B equals n) is decided at
    construction time and cached; non-pointed systems are rejected unless
    ``allow_non_pointed=True``, since circuits and vertex-based steps are
    only well-defined over pointed regions.  A may have zero rows (pure
    inequality systems such as boxes), and so may B.
    """

    __slots__ = ("A", "b", "B", "d", "n", "pointed")

    def __init__(
        self,
        A: RatMat,
        b: RatVec,
        B: RatMat,
        d: RatVec,
        *,
        allow_non_pointed: bool = False,
    ):
        if A.n != B.n:
            raise ValueError(f"A has {A.n} columns but B has {B.n}")
        if A.n < 1:
            raise ValueError("the ambient dimension must be at least 1")
        if b.dim != A.m:
            raise ValueError(f"b has {b.dim} entries but A has {A.m} rows")
        if d.dim != B.m:
            raise ValueError(f"d has {d.dim} entries but B has {B.m} rows")
        self.A = A
        self.b = b
        self.B = B
        self.d = d
        self.n = A.n
        self.pointed = rank(vstack(A, B)) == A.n
        if not self.pointed and not allow_non_pointed:
            raise NotPointedError(
                "the system contains a line (rank [A; B] < n); "
                "pass allow_non_pointed=True to build it anyway"
            )

    @classmethod
    def box(cls, lows, highs) -> "Polyhedron":
        """The box {low <= x <= high}: B = [I; -I], d = (high, -low)."""
        lows = RatVec(lows)
        highs = RatVec(highs)
        if lows.dim != highs.dim:
            raise ValueError("low and high bounds must have the same dimension")
        n = lows.dim
        ident = RatMat.identity(n)
        B = vstack(ident, ident.scale_rows(-1))
        d = highs.concat(-lows)
        return cls(RatMat([], cols=n), RatVec([]), B, d)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polyhedron)
            and self.A == other.A
            and self.b == other.b
            and self.B == other.B
            and self.d == other.d
        )

    def __hash__(self) -> int:
        return hash((self.A, self.b, self.B, self.d))

    def __repr__(self) -> str:
        return f"Polyhedron(n={self.n}, m_A={self.A.m}, m_B={self.B.m})"


def is_pointed(P: Polyhedron) -> bool:
    """True iff rank of A stacked on B equals the ambient dimension."""
    return P.pointed


def is_feasible(P: Polyhedron, x: RatVec) -> bool:
    """Exact membership test: Ax = b and Bx <= d entrywise."""
    if x.dim != P.n:
        raise ValueError(f"point has dimension {x.dim}, expected {P.n}")
    if P.A.matvec(x) != P.b:
        return False
    bx = P.B.matvec(x)
    return all(v <= bound for v, bound in zip(bx, P.d))


def active_rows(P: Polyhedron, x: Point) -> tuple[int, ...]:
    """Indices j of B with (Bx)_j = d_j, ascending.  x must be feasible."""
    if not is_feasible(P, x):
        raise ValueError("active_rows requires a feasible point")
    bx = P.B.matvec(x)
    return tuple(j for j in range(P.B.m) if bx[j] == P.d[j])


def max_step(P: Polyhedron, x0: Point, g: RatVec) -> Union[Rat, _Unbounded]:
    """Largest beta >= 0 with x0 + beta*g feasible, or UNBOUNDED.

    Every inequality row with (Bg)_j > 0 caps the step at
    (d_j - (Bx0)_j) / (Bg)_j and the smallest cap wins; with no such row
    the direction is unbounded.  g must satisfy Ag = 0, so equality rows
    never move.  The degenerate direction g = 0 yields step 0.
    """
    if not is_feasible(P, x0):
        raise ValueError("max_step requires a feasible starting point")
    if g.dim != P.n:
        raise ValueError(f"direction has dimension {g.dim}, expected {P.n}")
    if not P.A.matvec(g).is_zero():
        raise ValueError("direction leaves the equality subspace (A g != 0)")
    if g.is_zero():
        return Fraction(0)
    bx = P.B.matvec(x0)
    bg = P.B.matvec(g)
    best: Optional[Fraction] = None
    for j in range(P.B.m):
        if bg[j] > 0:
            bound = (P.d[j] - bx[j]) / bg[j]
            if best is None or bound < best:
                best = bound
    return UNBOUNDED if best is None else best


@dataclass(frozen=True)
class Instance:
    """A polyhedron together with the objective to minimize over it."""

    polyhedron: Polyhedron
    objective: RatVec


# ---------------------------------------------------------------------------
# File formats.
#
# Instance files are line-oriented ASCII, one LP per file:
#   line 1:            "n m_A m_B"
#   next m_A lines:    rows of A (n rationals each), then one line b
#                      (m_A rationals; the b line is omitted when m_A = 0)
#   next m_B lines:    rows of B, then one line d (omitted when m_B = 0)
#   last line:         objective c (n rationals)
# Points serialize as a single line of n rationals.  Rationals are "p/q"
# or "p" with an optional leading minus on p only.  Blank lines and lines
# starting with '#' are ignored.
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\S+")


def _data_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((i, line))
    return out


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(line)]


def _parse_row(line_no: int, line: str, count: int, what: str) -> list[Fraction]:
    toks = _tokens(line)
    if len(toks) < count:
        raise ParseError(
            f"expected {count} rationals for {what}, found {len(toks)}",
            line_no,
            len(line) + 1,
        )
    if len(toks) > count:
        raise ParseError(
            f"expected {count} rationals for {what}, found {len(toks)}",
            line_no,
            toks[count][0],
        )
    row = []
    for col, tok in toks:
        try:
            row.append(parse_rat(tok))
        except ValueError as exc:
            raise ParseError(str(exc), line_no, col) from None
    return row


def _parse_header(line_no: int, line: str) -> tuple[int, int, int]:
    toks = _tokens(line)
    if len(toks) != 3:
        raise ParseError(
            f"header must be 'n m_A m_B', found {len(toks)} tokens", line_no, 1
        )
    values = []
    for col, tok in toks:
        if not tok.isdigit():
            raise ParseError(f"malformed count {tok!r}", line_no, col)
        values.append(int(tok))
    return values[0], values[1], values[2]


def parse_instance_text(text: str, *, allow_non_pointed: bool = False) -> Instance:
    """Parse an instance file; malformed input raises ParseError with position."""
    lines = _data_lines(text)
    if not lines:
        raise ParseError("empty instance file", 1, 1)
    pos = 0

    def next_line(what: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise ParseError(f"unexpected end of file, expected {what}", last + 1, 1)
        item = lines[pos]
        pos += 1
        return item

    line_no, line = next_line("header")
    n, m_a, m_b = _parse_header(line_no, line)
    if n < 1:
        raise ParseError("dimension n must be at least 1", line_no, 1)

    a_rows = []
    for i in range(m_a):
        line_no, line = next_line(f"row {i + 1} of A")
        a_rows.append(_parse_row(line_no, line, n, f"row {i + 1} of A"))
    if m_a > 0:
        line_no, line = next_line("vector b")
        b = RatVec(_parse_row(line_no, line, m_a, "vector b"))
    else:
        b = RatVec([])

    b_rows = []
    for i in range(m_b):
        line_no, line = next_line(f"row {i + 1} of B")
        b_rows.append(_parse_row(line_no, line, n, f"row {i + 1} of B"))
    if m_b > 0:
        line_no, line = next_line("vector d")
        d = RatVec(_parse_row(line_no, line, m_b, "vector d"))
    else:
        d = RatVec([])

    line_no, line = next_line("objective c")
    c = RatVec(_parse_row(line_no, line, n, "objective c"))

    if pos != len(lines):
        extra_no, extra = lines[pos]
        raise ParseError("unexpected extra line after the objective", extra_no, 1)

    P = Polyhedron(
        RatMat(a_rows, cols=n),
        b,
        RatMat(b_rows, cols=n),
        d,
        allow_non_pointed=allow_non_pointed,
    )
    return Instance(P, c)


def load_instance(path, *, allow_non_pointed: bool = False) -> Instance:
    with open(path, "r", encoding="ascii") as handle:
        return parse_instance_text(handle.read(), allow_non_pointed=allow_non_pointed)


def format_instance(inst: Instance) -> str:
    """Serialize an instance; parsing the result reproduces it exactly."""
    P = inst.polyhedron
    out = [f"{P.n} {P.A.m} {P.B.m}"]
    for row in P.A.entries:
        out.append(" ".join(str(a) for a in row))
    if P.A.m > 0:
        out.append(P.b.to_text())
    for row in P.B.entries:
        out.append(" ".join(str(a) for a in row))
    if P.B.m > 0:
        out.append(P.d.to_text())
    out.append(inst.objective.to_text())
    return "\n".join(out) + "\n"


def parse_point_line(
    line: str, *, line_no: int = 1, expected_dim: Optional[int] = None
) -> RatVec:
    """Parse one line of space-separated rationals as a point."""
    toks = _tokens(line)
    if expected_dim is not None and len(toks) != expected_dim:
        col = len(line) + 1 if len(toks) < expected_dim else toks[expected_dim][0]
        raise ParseError(
            f"expected {expected_dim} rationals for a point, found {len(toks)}",
            line_no,
            col,
        )
    values = []
    for col, tok in toks:
        try:
            values.append(parse_rat(tok))
        except ValueError as exc:
            raise ParseError(str(exc), line_no, col) from None
    return RatVec(values)


def parse_point_text(text: str, *, expected_dim: Optional[int] = None) -> RatVec:
    """Parse the first data line of ``text`` as a point."""
    lines = _data_lines(text)
    if not lines:
        raise ParseError("no point data found", 1, 1)
    line_no, line = lines[0]
    return parse_point_line(line, line_no=line_no, expected_dim=expected_dim)


def format_point(x: RatVec) -> str:
    return x.to_text()
