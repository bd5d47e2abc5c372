"""Triangularizability oracles, member-wise space checks, named spaces.

A matrix is triangularizable over the ground field exactly when its
characteristic polynomial splits into linear factors, so the oracle
decides by the splitting test and then builds an explicit conjugator by
iterated eigenvector deflation.  The space-level check walks one
representative per projective class of the nonzero members (scaling a
matrix scales its eigenvalues, so splitting is a projective property).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .field import Element, FieldCtx, FieldMismatch, InfiniteField
from .matspace import Matrix, Subspace, kernel, rref
from .poly import Poly, char_poly, min_poly, split_completely


class InfiniteFieldExhaustive(Exception):
    """Exhaustive member scan requested over an infinite field."""


# ---------------------------------------------------------------------------
# single-matrix oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Outcome of the triangularizability test.

    When the verdict is positive, ``conjugator`` P satisfies
    P M P^-1 upper triangular (checked at construction time).  When
    negative, ``obstruction`` is a monic factor of the characteristic
    polynomial with no root in the field.
    """

    verdict: str                      # "triangularizable" | "not_triangularizable"
    conjugator: Optional[Matrix] = None
    obstruction: Optional[Poly] = None

    @property
    def ok(self) -> bool:
        return self.verdict == "triangularizable"


def triangularizable(m: Matrix) -> Certificate:
    res = split_completely(char_poly(m))
    if not res.splits:
        return Certificate("not_triangularizable", obstruction=res.witness)
    p = _deflation_conjugator(m)
    assert (p * m * p.inverse()).is_upper_triangular()
    return Certificate("triangularizable", conjugator=p)


def _deflation_conjugator(m: Matrix) -> Matrix:
    """P with P M P^-1 upper triangular, assuming the char poly splits.

    Each step takes the least eigenvalue in the field's order, the
    first RREF kernel vector as eigenvector, and recurses on the
    trailing block of the changed basis.
    """
    ctx, n = m.ctx, m.n
    if n == 1:
        return Matrix.identity(ctx, 1)
    lam = split_completely(char_poly(m)).roots[0]
    shifted = m - Matrix.identity(ctx, n) * lam
    v = kernel(shifted.rows, n, ctx)[0]
    cols = [v]
    for i in range(n):
        e = tuple(ctx.one if j == i else ctx.zero for j in range(n))
        if len(rref(cols + [e], n, ctx)) > len(cols):
            cols.append(e)
        if len(cols) == n:
            break
    q = Matrix(ctx, [[cols[j][i] for j in range(n)] for i in range(n)])
    inner = (q.inverse() * m * q).rows
    sub = Matrix(ctx, [row[1:] for row in inner[1:]])
    p2 = _deflation_conjugator(sub)
    z = ctx.zero
    block = [[ctx.one] + [z] * (n - 1)]
    for i in range(n - 1):
        block.append([z] + list(p2.rows[i]))
    return Matrix(ctx, block) * q.inverse()


def diagonalisable(m: Matrix) -> bool:
    """True iff the minimal polynomial splits with distinct roots."""
    res = split_completely(min_poly(m))
    return res.splits and len(set(res.roots)) == len(res.roots)


# ---------------------------------------------------------------------------
# projective member enumeration
# ---------------------------------------------------------------------------

def projective_coefficients(ctx: FieldCtx, d: int) -> Iterator[tuple[Element, ...]]:
    """One coefficient tuple per projective class, first nonzero entry 1.

    Order is the odometer order of whole tuples (most significant slot
    first, digits in field enumeration order) restricted to the
    representatives, which visits lead indices from last to first.
    """
    elems = list(ctx.elements())
    z, o = ctx.zero, ctx.one
    for lead in range(d - 1, -1, -1):
        head = (z,) * lead + (o,)
        for tail in itertools.product(elems, repeat=d - 1 - lead):
            yield head + tail


def projective_members(s: Subspace) -> Iterator[Matrix]:
    """One member per projective class of S minus zero, deterministic order."""
    ctx, w = s.ctx, s.n * s.n
    for coeffs in projective_coefficients(ctx, s.dim):
        vec = [ctx.zero] * w
        for c, b in zip(coeffs, s.basis):
            if c:
                vec = [acc + c * e for acc, e in zip(vec, b)]
        yield Matrix.from_vec(ctx, s.n, tuple(vec))


# ---------------------------------------------------------------------------
# space-level checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeakCheckReport:
    verdict: str                      # "all_<property>" | "counterexample"
    counterexample: Optional[Matrix]
    mode: str                         # "exhaustive" | "sampled"
    samples_checked: int

    @property
    def ok(self) -> bool:
        return self.counterexample is None


# integer sampling bound for coordinates over the rationals
SAMPLE_HEIGHT = 10


def weakly_triangularizable(s: Subspace, mode: str = "exhaustive",
                            samples: int = 1000, seed: int = 0) -> WeakCheckReport:
    """Do all members of S have splitting characteristic polynomials?

    Exhaustive mode needs a finite field and walks projective
    representatives with early exit; sampled mode draws ``samples``
    random members (over Q with integer coordinates of height at most
    SAMPLE_HEIGHT) and can only ever refute.
    """
    memo: dict = {}

    def splits(m: Matrix) -> bool:
        chi = char_poly(m)
        key = chi.coeffs
        if key not in memo:
            memo[key] = split_completely(chi).splits
        return memo[key]

    return _weak_check(s, splits, "all_triangularizable", mode, samples, seed)


def weakly_diagonalisable(s: Subspace, mode: str = "exhaustive",
                          samples: int = 1000, seed: int = 0) -> WeakCheckReport:
    """Do all members of S have split minimal polynomials with simple roots?"""
    return _weak_check(s, diagonalisable, "all_diagonalisable", mode, samples, seed)


def _weak_check(s: Subspace, good: Callable[[Matrix], bool], pass_verdict: str,
                mode: str, samples: int, seed: int) -> WeakCheckReport:
    if mode == "exhaustive":
        if not s.ctx.is_finite():
            raise InfiniteFieldExhaustive(
                f"cannot exhaust members over {s.ctx.name()}")
        checked = 0
        for m in projective_members(s):
            checked += 1
            if not good(m):
                return WeakCheckReport("counterexample", m, mode, checked)
        return WeakCheckReport(pass_verdict, None, mode, checked)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    import random as _random
    rng = _random.Random(seed)
    ctx, w = s.ctx, s.n * s.n
    for k in range(1, samples + 1):
        if ctx.is_finite():
            coeffs = [ctx.random_element(rng) for _ in range(s.dim)]
        else:
            coeffs = [ctx.from_int(rng.randint(-SAMPLE_HEIGHT, SAMPLE_HEIGHT))
                      for _ in range(s.dim)]
        vec = [ctx.zero] * w
        for c, b in zip(coeffs, s.basis):
            if c:
                vec = [acc + c * e for acc, e in zip(vec, b)]
        m = Matrix.from_vec(ctx, s.n, tuple(vec))
        if not good(m):
            return WeakCheckReport("counterexample", m, mode, k)
    return WeakCheckReport(pass_verdict, None, mode, samples)


# ---------------------------------------------------------------------------
# named spaces
# ---------------------------------------------------------------------------

def sym_space(ctx: FieldCtx, n: int) -> Subspace:
    mats = [Matrix.unit(ctx, n, i, i) for i in range(n)]
    mats += [Matrix.unit(ctx, n, i, j) + Matrix.unit(ctx, n, j, i)
             for i in range(n) for j in range(i + 1, n)]
    return Subspace.span(mats)


def alt_space(ctx: FieldCtx, n: int) -> Subspace:
    """Skew-symmetric matrices with zero diagonal (the diagonal condition
    only bites in characteristic 2)."""
    mats = [Matrix.unit(ctx, n, i, j) - Matrix.unit(ctx, n, j, i)
            for i in range(n) for j in range(i + 1, n)]
    return Subspace.span(mats, ctx=ctx, n=n)


def sl_space(ctx: FieldCtx, n: int) -> Subspace:
    mats = [Matrix.unit(ctx, n, i, j)
            for i in range(n) for j in range(n) if i != j]
    mats += [Matrix.unit(ctx, n, i, i) - Matrix.unit(ctx, n, n - 1, n - 1)
             for i in range(n - 1)]
    return Subspace.span(mats, ctx=ctx, n=n)


def upper_triangular_space(ctx: FieldCtx, n: int) -> Subspace:
    return Subspace.span([Matrix.unit(ctx, n, i, j)
                          for i in range(n) for j in range(i, n)])


def diagonal_space(ctx: FieldCtx, n: int) -> Subspace:
    return Subspace.span([Matrix.unit(ctx, n, i, i) for i in range(n)])


def full_space(ctx: FieldCtx, n: int) -> Subspace:
    return Subspace.span([Matrix.unit(ctx, n, i, j)
                          for i in range(n) for j in range(n)])


def joint(a: Subspace, b: Subspace) -> Subspace:
    """Block space [[A, C], [0, B]] with the off-diagonal block free."""
    if a.ctx is not b.ctx:
        raise FieldMismatch("joint over different fields")
    ctx, n, p = a.ctx, a.n, b.n
    size = n + p
    z = ctx.zero
    mats = []
    for m in a.basis_matrices():
        rows = [[m.rows[i][j] if i < n and j < n else z for j in range(size)]
                for i in range(size)]
        mats.append(Matrix(ctx, rows))
    for m in b.basis_matrices():
        rows = [[m.rows[i - n][j - n] if i >= n and j >= n else z
                 for j in range(size)] for i in range(size)]
        mats.append(Matrix(ctx, rows))
    for i in range(n):
        for j in range(p):
            mats.append(Matrix.unit(ctx, size, i, n + j))
    return Subspace.span(mats, ctx=ctx, n=size)


def pythagorean_witness(ctx: FieldCtx) -> Optional[tuple[Element, Element]]:
    """First pair (a, b) with a^2 + b^2 a non-square, or None.

    Finite fields are settled by exhaustion; over Q the pair (1, 1)
    works since 2 is not a rational square.
    """
    if ctx.is_finite():
        for a in ctx.elements():
            for b in ctx.elements():
                if ctx.is_square(a * a + b * b) is None:
                    return (a, b)
        return None
    if ctx.spec.kind == "rationals":
        return (ctx.one, ctx.one)
    raise InfiniteField(f"no witness scan over {ctx.name()}")
