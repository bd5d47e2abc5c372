"""Structural analysis of matrix spaces acting on column vectors.

A vector x is adapted to a space S when the only member of S with range
inside the line Fx and trace zero is 0.  Everything here is built from
that notion and from the invariant-subspace lattice: covering checks
against 2-complexes, bases avoiding prescribed subspaces, dimension
identities for the trace orthocomplement, dual-operator ranks, and the
block decomposition induced by a chain lattice.

Column subspaces of F^n are passed around as canonical RREF tuples of
row vectors, the same convention the scan machinery uses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .field import Element, FieldCtx, FieldMismatch, InfiniteField
from .matspace import (
    DimensionMismatch,
    Matrix,
    Subspace,
    c2,
    conjugate_space,
    in_rowspan,
    kernel,
    rref,
)
from .search import TooLarge, enumerate_rref_bases, enumerate_gl, gl_order, GL_ORBIT_CAP
from .spaces import (
    SAMPLE_HEIGHT,
    joint,
    projective_coefficients,
    weakly_triangularizable,
)

Vec = tuple


class ZeroVector(Exception):
    """The zero vector was passed where a nonzero one is required."""


class ProfileViolation(Exception):
    """Subspace list does not match the required dimension profile."""


class NotFound(Exception):
    """Greedy search exhausted its candidates."""


class NotAChain(Exception):
    """The invariant-subspace lattice is not totally ordered."""


def _require_nonzero(x) -> None:
    if not any(x):
        raise ZeroVector("need a nonzero vector")


def _outer(ctx: FieldCtx, x, c) -> Matrix:
    return Matrix(ctx, [[xi * cj for cj in c] for xi in x])


# ---------------------------------------------------------------------------
# adapted vectors
# ---------------------------------------------------------------------------

def inadapted_dim(s: Subspace, x: Sequence[Element]) -> int:
    """dim of {u in S : range(u) in Fx, tr(u) = 0}.

    Matrices with range inside Fx are exactly the outer products x c^t,
    and the trace of x c^t is c.x, so the candidates form the span of
    x r^t over a kernel basis r of the dot-with-x constraint.
    """
    _require_nonzero(x)
    ctx, n = s.ctx, s.n
    rows = kernel([tuple(x)], n, ctx)
    cand = Subspace.span([_outer(ctx, x, r) for r in rows], ctx=ctx, n=n)
    return s.intersect(cand).dim


def is_adapted(s: Subspace, x: Sequence[Element]) -> bool:
    return inadapted_dim(s, x) == 0


def _rational_candidates(ctx: FieldCtx, n: int):
    for h in range(1, SAMPLE_HEIGHT + 1):
        for v in itertools.product(range(-h, h + 1), repeat=n):
            if max(abs(c) for c in v) == h:
                yield tuple(ctx.from_int(c) for c in v)


def _point_stream(ctx: FieldCtx, n: int):
    if ctx.is_finite():
        return projective_coefficients(ctx, n)
    if ctx.spec.kind == "rationals":
        return _rational_candidates(ctx, n)
    raise InfiniteField(f"no point enumeration over {ctx.name()}")


def find_adapted(s: Subspace) -> Optional[tuple]:
    """First adapted projective point in canonical order, if any.

    Over the rationals this is a one-sided height-bounded scan: a hit is
    a certificate, a miss only means no adapted point of height <= 10.
    """
    for x in _point_stream(s.ctx, s.n):
        if is_adapted(s, x):
            return x
    return None


# ---------------------------------------------------------------------------
# 2-complexes
# ---------------------------------------------------------------------------

def two_complex_profile(n: int) -> tuple[int, ...]:
    return tuple((i + 1) // 2 for i in range(1, n + 1))


@dataclass(frozen=True)
class TwoComplex:
    """Tuple (V_1, ..., V_n) of subspaces with dim V_i = floor((i+1)/2)."""

    parts: tuple

    def __post_init__(self):
        dims = tuple(len(p) for p in self.parts)
        if dims != two_complex_profile(len(self.parts)):
            raise ProfileViolation(f"bad 2-complex dimensions {dims}")


def enumerate_two_complexes(ctx: FieldCtx, n: int):
    profile = two_complex_profile(n)
    pools = {d: list(enumerate_rref_bases(n, d, ctx)) for d in set(profile)}
    for combo in itertools.product(*[pools[d] for d in profile]):
        yield TwoComplex(tuple(combo))


def check_two_complex_lemma(s: Subspace) -> bool:
    """True iff every 2-complex misses at least one adapted vector of s."""
    ctx, n = s.ctx, s.n
    if not ctx.is_finite():
        raise InfiniteField("2-complex enumeration needs a finite field")
    if n > 3:
        raise TooLarge("2-complex enumeration supported for n <= 3")
    points = list(projective_coefficients(ctx, n))
    adapted = 0
    for i, x in enumerate(points):
        if is_adapted(s, x):
            adapted |= 1 << i
    if not adapted:
        return False
    profile = two_complex_profile(n)
    pools = {}
    for d in set(profile):
        masked = []
        for rows in enumerate_rref_bases(n, d, ctx):
            mask = 0
            for i, x in enumerate(points):
                if in_rowspan(x, rows):
                    mask |= 1 << i
            masked.append(mask)
        pools[d] = masked
    for combo in itertools.product(*[pools[d] for d in profile]):
        union = 0
        for mask in combo:
            union |= mask
        if adapted & ~union == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# bases avoiding prescribed subspaces
# ---------------------------------------------------------------------------

def avoiding_basis(subspaces: Sequence[Sequence[Sequence[Element]]]) -> list[tuple]:
    """Basis of F^n with no vector in any listed subspace.

    Expects (n-1)p subspaces, exactly p of each dimension 1..n-1, over a
    field with more than p elements; greedy scan of the candidate stream
    in enumeration order, backtracking on dead ends.
    """
    parsed = []
    ctx = n = None
    for vecs in subspaces:
        vecs = [tuple(v) for v in vecs]
        if not vecs:
            raise ProfileViolation("a listed subspace is zero")
        if ctx is None:
            first = vecs[0][0]
            ctx, n = first.ctx, len(vecs[0])
        parsed.append(rref(vecs, n, ctx))
    if ctx is None:
        raise ProfileViolation("need at least one subspace")
    counts = {}
    for basis in parsed:
        counts[len(basis)] = counts.get(len(basis), 0) + 1
    p_values = set(counts.values())
    if set(counts) != set(range(1, n)) or len(p_values) != 1:
        raise ProfileViolation(f"dimension counts {counts} are not p of each 1..{n - 1}")
    p = p_values.pop()
    if ctx.is_finite() and ctx.order() <= p:
        raise ProfileViolation(f"need |F| > {p}, got {ctx.order()}")

    stream = list(_point_stream(ctx, n))
    chosen: list[tuple] = []

    def independent(v):
        return not in_rowspan(v, rref(chosen, n, ctx))

    def extend(start: int) -> bool:
        if len(chosen) == n:
            return True
        for i in range(start, len(stream)):
            v = stream[i]
            if any(in_rowspan(v, basis) for basis in parsed):
                continue
            if not independent(v):
                continue
            chosen.append(v)
            if extend(i + 1):
                return True
            chosen.pop()
        return False

    if not extend(0):
        raise NotFound("no avoiding basis within the candidate stream")
    return chosen


# ---------------------------------------------------------------------------
# orthocomplement dimension identities and dual ranks
# ---------------------------------------------------------------------------

def _hom_into(ctx: FieldCtx, n: int, wbasis) -> Subspace:
    """Matrices whose range lies inside the span of wbasis."""
    units = [tuple(ctx.one if j == k else ctx.zero for j in range(n))
             for k in range(n)]
    mats = [_outer(ctx, w, e) for w in wbasis for e in units]
    return Subspace.span(mats, ctx=ctx, n=n)


def restriction_dims(t: Subspace, w: Sequence[Sequence[Element]]) -> tuple[int, int]:
    """(dim T intersect Hom(V,W), dim of T-orthocomplement restricted to W);
    the two always sum to dim(W) * n."""
    ctx, n = t.ctx, t.n
    wbasis = rref([tuple(v) for v in w], n, ctx)
    if not wbasis:
        raise ZeroVector("W must be nonzero")
    d1 = t.intersect(_hom_into(ctx, n, wbasis)).dim
    tperp = t.trace_orthocomplement()
    images = []
    for m in tperp.basis_matrices():
        row = []
        for wv in wbasis:
            row.extend(m.mul_vec(wv))
        images.append(tuple(row))
    d2 = len(rref(images, len(wbasis) * n, ctx))
    assert d1 + d2 == len(wbasis) * n
    return d1, d2


def dual_rank(s: Subspace, x: Sequence[Element]) -> int:
    """dim {u(x) : u in the trace orthocomplement of s}."""
    _require_nonzero(x)
    ctx, n = s.ctx, s.n
    sperp = s.trace_orthocomplement()
    images = [tuple(m.mul_vec(tuple(x))) for m in sperp.basis_matrices()]
    rk = len(rref(images, n, ctx))
    assert rk == n - s.intersect(_hom_into(ctx, n, [tuple(x)])).dim
    return rk


def max_dual_rank(s: Subspace) -> int:
    if not s.ctx.is_finite():
        raise InfiniteField("max over projective points needs a finite field")
    return max(dual_rank(s, x) for x in projective_coefficients(s.ctx, s.n))


# ---------------------------------------------------------------------------
# invariant subspaces and block decomposition
# ---------------------------------------------------------------------------

def invariant_subspaces(s: Subspace) -> list[tuple]:
    """All column subspaces invariant under every member, as RREF bases,
    sorted by dimension then basis order."""
    ctx, n = s.ctx, s.n
    if not ctx.is_finite():
        raise InfiniteField("invariant-subspace scan needs a finite field")
    if n > 4:
        raise TooLarge("invariant-subspace scan supported for n <= 4")
    mats = s.basis_matrices()
    out = []
    for d in range(n + 1):
        for rows in enumerate_rref_bases(n, d, ctx):
            if all(in_rowspan(tuple(m.mul_vec(v)), rows)
                   for m in mats for v in rows):
                out.append(rows)
    key = lambda rows: (len(rows),
                        tuple(tuple(ctx.sort_key(e) for e in v) for v in rows))
    out.sort(key=key)
    return out


def is_irreducible(s: Subspace) -> bool:
    return len(invariant_subspaces(s)) == 2


@dataclass
class Decomposition:
    flag: tuple                   # RREF bases, {0} through F^n
    block_dims: tuple[int, ...]
    blocks: list[Subspace]
    conjugator: Matrix


def decompose(s: Subspace) -> Decomposition:
    """Split s along its invariant-subspace chain.

    The conjugator Q completes the flag bases, so every member of the
    conjugated space (Q^-1 M Q) is block upper triangular; blocks are
    the induced spaces on successive quotients.
    """
    ctx, n = s.ctx, s.n
    lattice = invariant_subspaces(s)
    dims = [len(rows) for rows in lattice]
    if len(set(dims)) != len(dims):
        raise NotAChain("two invariant subspaces share a dimension")
    for prev, cur in zip(lattice, lattice[1:]):
        if not all(in_rowspan(v, cur) for v in prev):
            raise NotAChain("invariant subspaces are not nested")
    flag = tuple(lattice)
    block_dims = tuple(b - a for a, b in zip(dims, dims[1:]))

    cols: list[tuple] = []
    for piece in flag[1:]:
        for v in piece:
            if not in_rowspan(v, rref(cols, n, ctx)):
                cols.append(v)
    q = Matrix(ctx, [[cols[j][i] for j in range(n)] for i in range(n)])
    conj = conjugate_space(s, q)

    offsets = [0]
    for d in block_dims:
        offsets.append(offsets[-1] + d)
    blocks = []
    for b in range(len(block_dims)):
        a, z = offsets[b], offsets[b + 1]
        subs = []
        for m in conj.basis_matrices():
            for i in range(z, n):
                for j in range(min(a, i)):
                    assert not m.rows[i][j], "flag conjugation failed"
            subs.append(Matrix(ctx, [row[a:z] for row in m.rows[a:z]]))
        blocks.append(Subspace.span(subs, ctx=ctx, n=z - a))

    recomposed = blocks[0]
    for blk in blocks[1:]:
        recomposed = joint(recomposed, blk)
    assert recomposed.contains_space(conj)
    if s.dim == recomposed.dim:
        assert conj == recomposed
    return Decomposition(flag, block_dims, blocks, q)


def decomposition_to_json(dec: Decomposition) -> dict:
    return {
        "block_dims": list(dec.block_dims),
        "flag": [[[str(e) for e in v] for v in rows] for rows in dec.flag],
        "conjugator": [[str(e) for e in row] for row in dec.conjugator.rows],
    }


# ---------------------------------------------------------------------------
# similarity of spaces
# ---------------------------------------------------------------------------

@dataclass
class SimilarityReport:
    similar: bool
    method: str                   # "orbit" is exact, "fingerprint" heuristic


def _fingerprint(s: Subspace):
    ctx = s.ctx
    irreducible = is_irreducible(s) if s.n <= 4 else None
    weak = weakly_triangularizable(s).verdict
    c2s = None
    if ctx.order() ** s.dim <= 4096:
        c2s = sorted(ctx.sort_key(c2(m)) for m in s.members())
    return (s.dim, irreducible, weak, tuple(c2s) if c2s else None)


def similar_spaces(a: Subspace, b: Subspace) -> SimilarityReport:
    """Conjugacy test: exact GL orbit scan when the group is small,
    otherwise a conjugation-invariant fingerprint (heuristic)."""
    if a.ctx is not b.ctx:
        raise FieldMismatch("spaces over different fields")
    if a.n != b.n:
        raise DimensionMismatch("spaces of different ambient size")
    if not a.ctx.is_finite():
        raise InfiniteField("similarity scan needs a finite field")
    if gl_order(a.ctx.order(), a.n) <= GL_ORBIT_CAP:
        if a.dim != b.dim:
            return SimilarityReport(False, "orbit")
        for g in enumerate_gl(a.ctx, a.n):
            if conjugate_space(a, g) == b:
                return SimilarityReport(True, "orbit")
        return SimilarityReport(False, "orbit")
    return SimilarityReport(_fingerprint(a) == _fingerprint(b), "fingerprint")
