"""Matrices over an exact field and subspaces of the full matrix space.

A subspace is stored as the reduced row echelon basis of its row-major
vectorizations, so structural equality of bases decides subspace
equality, and every derived object (orthocomplements, intersections,
conjugates) is canonical.  Intersections go through annihilator duality
under the coordinate dot product; the orthocomplement operation proper
uses the trace form tr(AB).
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Optional, Sequence

from .field import Element, FieldCtx, FieldMismatch, ParseError, field_by_name


class DimensionMismatch(Exception):
    pass


class SingularP(Exception):
    """Raised when a matrix that must be invertible is singular."""


Vec = tuple[Element, ...]


class Matrix:
    """Immutable square matrix with Element entries."""

    __slots__ = ("ctx", "n", "rows")

    def __init__(self, ctx: FieldCtx, rows: Sequence[Sequence[Element]]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        self.ctx = ctx
        self.n = n
        self.rows = tuple(tuple(ctx.from_int(e) if isinstance(e, int) else e
                                for e in r) for r in rows)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, ctx, n):
        z = ctx.zero
        return cls(ctx, [[z] * n for _ in range(n)])

    @classmethod
    def identity(cls, ctx, n):
        z, o = ctx.zero, ctx.one
        return cls(ctx, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, ctx, n, i, j):
        z, o = ctx.zero, ctx.one
        return cls(ctx, [[o if (r, c) == (i, j) else z for c in range(n)]
                         for r in range(n)])

    @classmethod
    def diag(cls, ctx, entries):
        entries = [ctx.from_int(e) if isinstance(e, int) else e for e in entries]
        z = ctx.zero
        n = len(entries)
        return cls(ctx, [[entries[i] if i == j else z for j in range(n)]
                         for i in range(n)])

    @classmethod
    def from_vec(cls, ctx, n, vec: Vec):
        return cls(ctx, [vec[i * n:(i + 1) * n] for i in range(n)])

    # -- arithmetic --------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Matrix) or other.n != self.n:
            raise DimensionMismatch("matrix size mismatch")
        if other.ctx is not self.ctx:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other):
        self._check(other)
        return Matrix(self.ctx, [[a + b for a, b in zip(r1, r2)]
                                 for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.ctx, [[a - b for a, b in zip(r1, r2)]
                                 for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.ctx, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            cols = list(zip(*other.rows))
            return Matrix(self.ctx,
                          [[_dot(r, c, self.ctx) for c in cols] for r in self.rows])
        other = self.ctx.from_int(other) if isinstance(other, int) else other
        return Matrix(self.ctx, [[a * other for a in r] for r in self.rows])

    def __rmul__(self, other):
        if isinstance(other, Matrix):
            return NotImplemented
        return self.__mul__(other)

    def __pow__(self, e: int):
        acc = Matrix.identity(self.ctx, self.n)
        base = self
        if e < 0:
            base = base.inverse()
            e = -e
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def mul_vec(self, v: Vec) -> Vec:
        return tuple(_dot(r, v, self.ctx) for r in self.rows)

    def transpose(self):
        return Matrix(self.ctx, list(zip(*self.rows)))

    def trace(self) -> Element:
        acc = self.ctx.zero
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def det(self) -> Element:
        ctx = self.ctx
        m = [list(r) for r in self.rows]
        det = ctx.one
        for col in range(self.n):
            piv = next((r for r in range(col, self.n) if m[r][col]), None)
            if piv is None:
                return ctx.zero
            if piv != col:
                m[piv], m[col] = m[col], m[piv]
                det = -det
            det = det * m[col][col]
            inv = ctx.invert(m[col][col])
            for r in range(col + 1, self.n):
                if m[r][col]:
                    f = m[r][col] * inv
                    for c in range(col, self.n):
                        m[r][c] = m[r][c] - f * m[col][c]
        return det

    def inverse(self) -> "Matrix":
        ctx, n = self.ctx, self.n
        aug = [list(self.rows[i]) + [ctx.one if j == i else ctx.zero
                                     for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise SingularP("matrix is singular")
            aug[piv], aug[col] = aug[col], aug[piv]
            inv = ctx.invert(aug[col][col])
            aug[col] = [a * inv for a in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return Matrix(ctx, [row[n:] for row in aug])

    def rank(self) -> int:
        return len(rref(self.rows, self.n, self.ctx))

    def vec(self) -> Vec:
        return tuple(e for row in self.rows for e in row)

    def is_upper_triangular(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.n) for j in range(i))

    def is_symmetric(self) -> bool:
        return self.rows == self.transpose().rows

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.ctx is self.ctx
                and other.rows == self.rows)

    def __hash__(self):
        return hash((id(self.ctx), self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.ctx.format(e) for e in r) for r in self.rows)
        return f"[{body}]"


def _dot(u: Iterable[Element], v: Iterable[Element], ctx) -> Element:
    acc = ctx.zero
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# row spaces over F^width
# ---------------------------------------------------------------------------

def rref(vectors: Iterable[Vec], width: int, ctx: FieldCtx) -> tuple[Vec, ...]:
    """Reduced row echelon basis of the span of `vectors`."""
    rows: list[list[Element]] = []
    pivots: list[int] = []
    for vec in vectors:
        v = list(vec)
        for row, p in zip(rows, pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        p = next((i for i in range(width) if v[i]), None)
        if p is None:
            continue
        inv = ctx.invert(v[p])
        v = [a * inv for a in v]
        for row in rows:
            if row[p]:
                f = row[p]
                row[:] = [a - f * b for a, b in zip(row, v)]
        rows.append(v)
        pivots.append(p)
    order = sorted(range(len(rows)), key=lambda i: pivots[i])
    return tuple(tuple(rows[i]) for i in order)


def row_pivots(basis: Sequence[Vec]) -> tuple[int, ...]:
    return tuple(next(i for i, e in enumerate(row) if e) for row in basis)


def in_rowspan(vec: Vec, basis: Sequence[Vec]) -> bool:
    v = list(vec)
    for row in basis:
        p = next(i for i, e in enumerate(row) if e)
        if v[p]:
            f = v[p]
            v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


def kernel(rows: Sequence[Vec], width: int, ctx: FieldCtx) -> tuple[Vec, ...]:
    """RREF basis of {x : r . x = 0 for every constraint row r}."""
    basis = rref(rows, width, ctx)
    pivots = list(row_pivots(basis))
    free = [c for c in range(width) if c not in pivots]
    out = []
    for f in free:
        v = [ctx.zero] * width
        v[f] = ctx.one
        for row, p in zip(basis, pivots):
            v[p] = -row[f]
        out.append(tuple(v))
    return rref(out, width, ctx)


def solve(rows: Sequence[Vec], rhs: Vec, ctx: FieldCtx) -> Optional[Vec]:
    """One exact solution x of rows . x = rhs, or None if inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    if not rows:
        return None
    width = len(rows[0])
    aug = rref([tuple(r) + (b,) for r, b in zip(rows, rhs)], width + 1, ctx)
    x = [ctx.zero] * width
    for row in aug:
        p = next(i for i, e in enumerate(row) if e)
        if p == width:
            return None
        x[p] = row[width]
    # residual check guards against free-variable interactions
    for r, b in zip(rows, rhs):
        if _dot(r, x, ctx) != b:
            return None
    return tuple(x)


# ---------------------------------------------------------------------------
# subspaces of Mat_n(F)
# ---------------------------------------------------------------------------

class Subspace:
    """Linear subspace of Mat_n(F) with a canonical RREF basis."""

    __slots__ = ("ctx", "n", "basis")

    def __init__(self, ctx: FieldCtx, n: int, basis: tuple[Vec, ...]):
        self.ctx = ctx
        self.n = n
        self.basis = basis

    @classmethod
    def span(cls, mats: Sequence[Matrix], *, ctx: FieldCtx = None,
             n: int = None) -> "Subspace":
        """Span of the given matrices; ctx and n are only needed when
        the list is empty."""
        mats = list(mats)
        if mats:
            ctx, n = mats[0].ctx, mats[0].n
        elif ctx is None or n is None:
            raise ValueError("empty span needs explicit ctx and n")
        vecs = []
        for m in mats:
            if m.n != n:
                raise DimensionMismatch("span over mixed matrix sizes")
            if m.ctx is not ctx:
                raise FieldMismatch("span over mixed fields")
            vecs.append(m.vec())
        return cls(ctx, n, rref(vecs, n * n, ctx))

    @classmethod
    def from_vectors(cls, ctx, n, vecs: Iterable[Vec]) -> "Subspace":
        return cls(ctx, n, rref(vecs, n * n, ctx))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrices(self) -> list[Matrix]:
        return [Matrix.from_vec(self.ctx, self.n, v) for v in self.basis]

    def members(self) -> Iterator[Matrix]:
        """Every matrix in the span; finite fields only."""
        elems = list(self.ctx.elements())
        w = self.n * self.n
        for coeffs in itertools.product(elems, repeat=self.dim):
            vec = [self.ctx.zero] * w
            for c, b in zip(coeffs, self.basis):
                if c:
                    vec = [acc + c * e for acc, e in zip(vec, b)]
            yield Matrix.from_vec(self.ctx, self.n, tuple(vec))

    def contains(self, m: Matrix) -> bool:
        return in_rowspan(m.vec(), self.basis)

    def contains_space(self, other: "Subspace") -> bool:
        return all(in_rowspan(v, self.basis) for v in other.basis)

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_vectors(self.ctx, self.n, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        # annihilator duality under the coordinate dot product
        self._check(other)
        w = self.n * self.n
        ann = kernel(self.basis, w, self.ctx) + kernel(other.basis, w, self.ctx)
        return Subspace(self.ctx, self.n, kernel(rref(ann, w, self.ctx), w, self.ctx))

    def trace_orthocomplement(self) -> "Subspace":
        """{u : tr(u v) = 0 for all v in self}."""
        w = self.n * self.n
        constraints = [Matrix.from_vec(self.ctx, self.n, v).transpose().vec()
                       for v in self.basis]
        return Subspace(self.ctx, self.n, kernel(constraints, w, self.ctx))

    def conjugate(self, p: Matrix) -> "Subspace":
        """Change of basis sending each member M to P^-1 M P."""
        if p.det() == p.ctx.zero:
            raise SingularP("conjugating matrix is singular")
        pinv = p.inverse()
        return Subspace.span([pinv * m * p for m in self.basis_matrices()],
                             ctx=self.ctx, n=self.n)

    def _check(self, other):
        if other.n != self.n:
            raise DimensionMismatch("subspace ambient mismatch")
        if other.ctx is not self.ctx:
            raise FieldMismatch("subspaces over different fields")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.ctx is self.ctx
                and other.n == self.n and other.basis == self.basis)

    def __hash__(self):
        return hash((id(self.ctx), self.n, self.basis))

    def __repr__(self):
        return f"<subspace dim {self.dim} of Mat_{self.n}({self.ctx.name()})>"


def conjugate_space(s: Subspace, p: Matrix) -> Subspace:
    return s.conjugate(p)


# ---------------------------------------------------------------------------
# trace form and the second characteristic coefficient
# ---------------------------------------------------------------------------

def trace_form(a: Matrix, b: Matrix) -> Element:
    a._check(b)
    ctx = a.ctx
    acc = ctx.zero
    for i in range(a.n):
        for j in range(a.n):
            x, y = a.rows[i][j], b.rows[j][i]
            if x and y:
                acc = acc + x * y
    return acc


def c2(m: Matrix) -> Element:
    """Sum of the principal 2x2 minors; valid in every characteristic."""
    ctx = m.ctx
    acc = ctx.zero
    for i in range(m.n):
        for j in range(i + 1, m.n):
            acc = acc + m.rows[i][i] * m.rows[j][j] - m.rows[i][j] * m.rows[j][i]
    return acc


def b2(a: Matrix, b: Matrix) -> Element:
    """Polar form of c2: tr(A)tr(B) - tr(AB), division free."""
    return a.trace() * b.trace() - trace_form(a, b)


# ---------------------------------------------------------------------------
# randomness (Mersenne Twister via random.Random, seeded by callers)
# ---------------------------------------------------------------------------

def random_matrix(ctx: FieldCtx, n: int, rng) -> Matrix:
    return Matrix(ctx, [[ctx.random_element(rng) for _ in range(n)]
                        for _ in range(n)])


def random_invertible(ctx: FieldCtx, n: int, rng) -> Matrix:
    while True:
        m = random_matrix(ctx, n, rng)
        if m.det():
            return m


def random_subspace(ctx: FieldCtx, n: int, d: int, rng) -> Subspace:
    """Random subspace of Mat_n of dimension at most d."""
    return Subspace.span([random_matrix(ctx, n, rng) for _ in range(d)],
                         ctx=ctx, n=n)


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def space_to_text(s: Subspace) -> str:
    lines = [f"field {s.ctx.name()}", f"n {s.n} dim {s.dim}"]
    for mat in s.basis_matrices():
        lines.append("")
        for row in mat.rows:
            lines.append(" ".join(s.ctx.format(e) for e in row))
    return "\n".join(lines) + "\n"


def space_from_text(text: str) -> Subspace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("field "):
        raise ParseError("space file must start with a 'field' line")
    ctx = field_by_name(lines[0].split(None, 1)[1])
    head = lines[1].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "dim":
        raise ParseError(f"bad header line {lines[1]!r}")
    n, d = int(head[1]), int(head[3])
    body = lines[2:]
    if len(body) != n * d:
        raise ParseError(f"expected {n * d} matrix rows, found {len(body)}")
    mats = []
    for b in range(d):
        rows = []
        for i in range(n):
            entries = body[b * n + i].split()
            if len(entries) != n:
                raise ParseError(f"row {body[b * n + i]!r} needs {n} entries")
            rows.append([ctx.parse(e) for e in entries])
        mats.append(Matrix(ctx, rows))
    out = Subspace.span(mats, ctx=ctx, n=n)
    if out.dim != d:
        raise ParseError("listed matrices are linearly dependent")
    return out


def matrix_to_text(m: Matrix) -> str:
    lines = [f"field {m.ctx.name()}", f"n {m.n}"]
    for row in m.rows:
        lines.append(" ".join(m.ctx.format(e) for e in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> Matrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("field "):
        raise ParseError("matrix file must start with a 'field' line")
    ctx = field_by_name(lines[0].split(None, 1)[1])
    head = lines[1].split()
    if len(head) != 2 or head[0] != "n":
        raise ParseError(f"bad header line {lines[1]!r}")
    n = int(head[1])
    if len(lines) != 2 + n:
        raise ParseError(f"expected {n} matrix rows")
    rows = []
    for ln in lines[2:]:
        entries = ln.split()
        if len(entries) != n:
            raise ParseError(f"row {ln!r} needs {n} entries")
        rows.append([ctx.parse(e) for e in entries])
    return Matrix(ctx, rows)
