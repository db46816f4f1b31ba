"""Conformal decomposition of kernel vectors into sign-compatible circuits.

Any nonzero z with Az = 0 splits as z = sum_i alpha_i * g_i where every
g_i is a circuit, every alpha_i is positive, all B-images (B g_i) agree
in sign with Bz componentwise and vanish where Bz does, and the number of
terms never exceeds n - rank(A).  This is the engine behind the
polynomial-time dimension-factor approximation of deepest-descent steps.

The implementation walks the sign-restricted subcone

    F(z) = {v : Av = 0, sigma_j (Bv)_j >= 0 on supp(Bz), (Bv)_j = 0 off it}

with sigma = sign(Bz).  Each round locates an extreme ray of the minimal
face of F(z) containing the current residual r: starting from v = r, it
repeatedly picks a kernel direction of the rows active at v and moves
until one more row of the B-image hits zero, which raises the active rank;
when the active system reaches rank n - 1 its kernel generator is the
desired circuit.  The emitted step length is the largest alpha keeping
r - alpha*g inside F(z), so at least one support coordinate dies per term
and the face dimension drops strictly, which bounds the term count by
dim F(z) <= n - rank(A).  All updates are exact and termination is the
literal equality r = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circuits import Circuit, circuit_from_vector, is_circuit_direction
from .polyhedron import Polyhedron
from .ratlin import Rat, RatVec, kernel_basis, rank, vstack


@dataclass(frozen=True)
class ConformalSum:
    """Ordered positive circuit combination reconstructing ``target`` exactly."""

    terms: tuple[tuple[Rat, Circuit], ...]
    target: RatVec


def _sign(value: Fraction) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _parallel(u: RatVec, v: RatVec) -> bool:
    idx = next((i for i, a in enumerate(v) if a != 0), None)
    if idx is None:
        return u.is_zero()
    if u[idx] == 0:
        return False
    mu = u[idx] / v[idx]
    return u == mu * v


def _extreme_ray_of_minimal_face(
    P: Polyhedron, r: RatVec, br: RatVec, sigma: tuple[int, ...]
) -> Circuit:
    """An extreme ray of the face of F(z) whose active pattern matches r.

    Returned oriented so its B-image is sign-compatible with sigma.
    """
    v = r
    bv = br
    while True:
        active = [j for j in range(P.B.m) if bv[j] == 0]
        stacked = vstack(P.A, P.B.take_rows(active))
        ker = kernel_basis(stacked)
        if len(ker) == 1:
            gen = ker[0]
            circ = circuit_from_vector(gen)
            idx = next(i for i, a in enumerate(gen) if a != 0)
            if v[idx] / gen[idx] < 0:
                circ = -circ
            return circ
        w = ker[0] if not _parallel(ker[0], v) else ker[1]
        bw = P.B.matvec(w)
        t_fwd = None  # largest t with v - t*w staying sign-feasible
        t_bwd = None  # same for v + t*w
        for j in range(P.B.m):
            if bv[j] == 0:
                continue
            s = sigma[j]
            swj = s * bw[j]
            svj = s * bv[j]
            if swj > 0:
                t = svj / swj
                if t_fwd is None or t < t_fwd:
                    t_fwd = t
            elif swj < 0:
                t = svj / (-swj)
                if t_bwd is None or t < t_bwd:
                    t_bwd = t
        if t_fwd is not None:
            v = v - t_fwd * w
        elif t_bwd is not None:
            v = v + t_bwd * w
        else:  # pragma: no cover - would mean Bw = 0, impossible when pointed
            raise AssertionError("direction with zero B-image in a pointed system")
        bv = P.B.matvec(v)


def decompose(P: Polyhedron, z: RatVec) -> ConformalSum:
    """Conformal sum for z: positive, pairwise sign-compatible circuit terms.

    Requires Az = 0 and z != 0.  The terms are listed in canonical
    (lexicographic) circuit order; the reconstruction, the sign coupling
    to Bz, and the term bound n - rank(A) all hold exactly.
    """
    if z.dim != P.n:
        raise ValueError(f"vector has dimension {z.dim}, expected {P.n}")
    if z.is_zero():
        raise ValueError("cannot decompose the zero vector")
    if not P.A.matvec(z).is_zero():
        raise ValueError("decompose requires A z = 0")

    bz = P.B.matvec(z)
    sigma = tuple(_sign(e) for e in bz)
    bound = P.n - rank(P.A)
    terms: list[tuple[Fraction, Circuit]] = []
    r = z
    br = bz
    while not r.is_zero():
        g = _extreme_ray_of_minimal_face(P, r, br, sigma)
        bg = P.B.matvec(g.vec)
        alpha = None
        for j in range(P.B.m):
            if br[j] == 0:
                if bg[j] != 0:  # pragma: no cover - excluded by face construction
                    raise AssertionError("extreme ray leaves the minimal face")
                continue
            swj = sigma[j] * bg[j]
            if swj > 0:
                cap = (sigma[j] * br[j]) / swj
                if alpha is None or cap < alpha:
                    alpha = cap
        if alpha is None or alpha <= 0:  # pragma: no cover
            raise AssertionError("no positive step along the selected circuit")
        terms.append((alpha, g))
        if len(terms) > bound:  # pragma: no cover
            raise AssertionError("conformal decomposition exceeded its term bound")
        r = r - alpha * g.vec
        br = P.B.matvec(r)
    terms.sort(key=lambda term: term[1].entries)
    return ConformalSum(tuple(terms), z)


def verify_conformal(P: Polyhedron, s: ConformalSum) -> bool:
    """Check every conformal-sum invariant; True iff all hold.

    Checks exact reconstruction, positivity of the coefficients, the term
    bound n - rank(A), componentwise sign-compatibility of every B g_i
    with B target (including vanishing where B target does), and that
    every g_i is a circuit direction.
    """
    if s.target.dim != P.n:
        return False
    if any(g.vec.dim != P.n for _, g in s.terms):
        return False
    if any(alpha <= 0 for alpha, _ in s.terms):
        return False
    if len(s.terms) > P.n - rank(P.A):
        return False
    total = RatVec.zeros(P.n)
    for alpha, g in s.terms:
        total = total + alpha * g.vec
    if total != s.target:
        return False
    bt = P.B.matvec(s.target)
    for _, g in s.terms:
        bg = P.B.matvec(g.vec)
        for j in range(P.B.m):
            if bg[j] * bt[j] < 0:
                return False
            if bt[j] == 0 and bg[j] != 0:
                return False
    return all(is_circuit_direction(P, g.vec) for _, g in s.terms)


def format_conformal(s: ConformalSum) -> str:
    """Serialize as one line per term: ``alpha | g_1 g_2 ... g_n``."""
    return "\n".join(f"{alpha} | {g.to_text()}" for alpha, g in s.terms) + "\n"
