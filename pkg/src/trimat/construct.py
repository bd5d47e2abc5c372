"""Constructive certificates of non-triangularizability.

The central move: a matrix with a free first row, a fixed nonzero first
column C, and a fixed trailing block N can always have its first row
filled in so that the characteristic polynomial picks up a rootless
quadratic factor.  ``hessenberg_complete`` solves the underlying affine
system (prescribing the characteristic polynomial of a regular
Hessenberg matrix perturbed along its top row), ``erasure_witness``
drives it through a Krylov change of basis, and
``special_erasure_witness`` lifts the result to a trace-zero scalar
top-left block in characteristic two.  ``selfadjoint_witness`` and
``symmetrize_attempt`` cover the companion construction for symmetric
bilinear forms: a selfadjoint operator with non-split characteristic
polynomial, and a best-effort orthonormalization that rewrites a
selfadjoint operator as a genuinely symmetric matrix when the field
supplies the required square roots.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Element, FieldCtx
from .matspace import DimensionMismatch, Matrix, in_rowspan, kernel, rref, solve
from .poly import (
    Poly,
    UnsupportedDegree,
    char_poly,
    format_poly,
    poly_trace,
    split_completely,
)

Vec = tuple


class NoRootlessQuadratic(Exception):
    """Every monic quadratic over the field has a root."""


class NotRegularHessenberg(Exception):
    pass


class TraceMismatch(Exception):
    pass


class SingularSystem(Exception):
    """The completion system degenerated; impossible for valid inputs."""


class ZeroColumn(Exception):
    pass


class ZeroC(Exception):
    pass


class SquareLambda(Exception):
    pass


class NotSelfadjoint(Exception):
    pass


class AlternatingGram(Exception):
    pass


# ---------------------------------------------------------------------------
# rootless quadratics
# ---------------------------------------------------------------------------

def rootless_quadratic(ctx: FieldCtx) -> Poly:
    """Deterministic monic degree-2 polynomial with no root in the field.

    Finite fields of odd characteristic get t^2 - v with v the least
    non-square in enumeration order; characteristic two gets t^2 + t + v
    with the least v outside the image of w -> w^2 + w.  The rationals
    use t^2 - 2 and F_p(x) uses t^2 - x.
    """
    z, o = ctx.zero, ctx.one
    if ctx.is_finite():
        if ctx.char() != 2:
            for v in ctx.elements():
                if v and ctx.is_square(v) is None:
                    return Poly(ctx, [-v, z, o])
            raise NoRootlessQuadratic(ctx.name())
        for v in ctx.elements():
            f = Poly(ctx, [v, o, o])
            if all(f(w) for w in ctx.elements()):
                return f
        raise NoRootlessQuadratic(ctx.name())
    if ctx.kind == "rationals":
        return Poly(ctx, [ctx.from_int(-2), z, o])
    if ctx.kind == "rational_function":
        return Poly(ctx, [-ctx.parse("x"), z, o])
    raise NoRootlessQuadratic(f"no rootless quadratic known over {ctx.name()}")


# ---------------------------------------------------------------------------
# Hessenberg completion
# ---------------------------------------------------------------------------

def hessenberg_complete(m: Matrix, r: Poly) -> Vec:
    """Row R with char(M + top-row tail perturbation by R) = r, exactly.

    M must be regular Hessenberg (zero below the first subdiagonal,
    subdiagonal entries nonzero) and r monic of matching degree and
    trace; the perturbation adds R to the entries (1,2)..(1,n), leaving
    the diagonal alone.  Each characteristic coefficient is affine in R
    because the determinant is multilinear in rows and only row one
    varies, so evaluating at zero and at unit rows assembles an exact
    linear system over the n-1 coefficients below the trace.
    """
    ctx, n = m.ctx, m.n
    for j in range(n - 1):
        if not m.rows[j + 1][j]:
            raise NotRegularHessenberg(f"zero subdiagonal entry at ({j + 2},{j + 1})")
    for i in range(n):
        for j in range(n):
            if i > j + 1 and m.rows[i][j]:
                raise NotRegularHessenberg(f"nonzero entry at ({i + 1},{j + 1})")
    if not r.is_monic() or r.degree != n:
        raise ValueError("target must be monic of the matrix dimension")
    if poly_trace(r) != m.trace():
        raise TraceMismatch("target trace differs from the matrix trace")
    if n == 1:
        return ()

    z, o = ctx.zero, ctx.one

    def perturbed(tail):
        rows = [list(row) for row in m.rows]
        for j, e in enumerate(tail, start=1):
            rows[0][j] = rows[0][j] + e
        return Matrix(ctx, rows)

    base = char_poly(m)
    slopes = []
    for j in range(n - 1):
        unit = tuple(o if i == j else z for i in range(n - 1))
        shifted = char_poly(perturbed(unit))
        slopes.append([shifted[i] - base[i] for i in range(n - 1)])
    system = [tuple(slopes[j][i] for j in range(n - 1)) for i in range(n - 1)]
    rhs = tuple(r[i] - base[i] for i in range(n - 1))
    tail = solve(system, rhs, ctx)
    if tail is None or kernel(system, n - 1, ctx):
        raise SingularSystem("completion system is singular")
    assert char_poly(perturbed(tail)) == r
    return tail


# ---------------------------------------------------------------------------
# erasure witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErasureWitness:
    """First-row completion making the bordered matrix non-triangularizable."""

    a: Element
    R: Vec
    bordered: Matrix
    obstruction: Poly


def _bordered(ctx, corner, row, col, block):
    rows = [[corner] + list(row)]
    for i in range(block.n):
        rows.append([col[i]] + list(block.rows[i]))
    return Matrix(ctx, rows)


def erasure_witness(n_block: Matrix, c: Vec) -> ErasureWitness:
    """Fill the free first row of [[a, R], [C, N]] to block triangularization.

    Works in the Krylov basis of the zero-row bordered matrix at e_1: the
    leading block becomes a companion matrix, the first row stays the
    only unknown under the change of basis, and hessenberg_complete
    steers the leading block's characteristic polynomial to
    t^(d-2) q(t) for a rootless quadratic q.  The free corner entry a
    absorbs the trace constraint.
    """
    ctx, n = n_block.ctx, n_block.n
    col = tuple(ctx.from_int(e) if isinstance(e, int) else e for e in c)
    if len(col) != n:
        raise DimensionMismatch("column length must match the trailing block")
    if not any(col):
        raise ZeroColumn("the fixed first column is zero")
    q = rootless_quadratic(ctx)
    k = n + 1
    z, o = ctx.zero, ctx.one

    m0 = _bordered(ctx, z, (z,) * n, col, n_block)
    chain = [(o,) + (z,) * n]
    while True:
        nxt = m0.mul_vec(chain[-1])
        if in_rowspan(nxt, rref(chain, k, ctx)):
            break
        chain.append(nxt)
    d = len(chain)                      # >= 2 because the column is nonzero
    basis = list(chain)
    for i in range(k):
        if len(basis) == k:
            break
        e = tuple(o if j == i else z for j in range(k))
        if not in_rowspan(e, rref(basis, k, ctx)):
            basis.append(e)
    p = Matrix(ctx, [[basis[j][i] for j in range(k)] for i in range(k)])
    pinv = p.inverse()
    changed = pinv * m0 * p
    # Krylov invariance: nothing below the leading d x d companion block
    assert all(not changed.rows[i][j] for i in range(d, k) for j in range(d))

    target = q * Poly(ctx, [z] * (d - 2) + [o])
    lead = [list(row[:d]) for row in changed.rows[:d]]
    corner = poly_trace(target) - Matrix(ctx, lead).trace()
    lead[0][0] = lead[0][0] + corner
    tail = hessenberg_complete(Matrix(ctx, lead), target)

    new_row = (corner,) + tuple(tail) + (z,) * (k - d)
    u = pinv.transpose().mul_vec(new_row)
    bordered = _bordered(ctx, u[0], u[1:], col, n_block)
    chi = char_poly(bordered)
    assert chi % q == Poly.zero(ctx)
    try:
        res = split_completely(chi)
        assert not res.splits
        obstruction = res.witness
    except UnsupportedDegree:
        # the function-field oracle stops at cubics; the rootless
        # quadratic divisor certifies non-splitting on its own
        assert not split_completely(q).splits
        obstruction = q
    return ErasureWitness(a=u[0], R=tuple(u[1:]), bordered=bordered,
                          obstruction=obstruction)


def special_erasure_witness(c_block, d_block: Matrix):
    """Trace-zero top-left completion [[aI_2, B], [C, D]], characteristic two.

    Picks the first nonzero column of C, reduces to the one-smaller
    bordered shape handled by erasure_witness, and re-embeds: the row R
    lands in the matching row of B, the other row of B stays zero, so
    the hyperplane ignoring the other coordinate is invariant and the
    characteristic polynomial is (t - a) times the non-split one.
    Scalar blocks aI_2 have trace 2a = 0, staying inside sl_2.
    """
    ctx, m = d_block.ctx, d_block.n
    if ctx.char() != 2:
        raise ValueError("scalar top-left blocks are trace-zero only in characteristic 2")
    rows = [tuple(ctx.from_int(e) if isinstance(e, int) else e for e in r)
            for r in c_block]
    if len(rows) != m or any(len(r) != 2 for r in rows):
        raise DimensionMismatch("left block must have two columns and match D")
    jcol = next((j for j in range(2) if any(r[j] for r in rows)), None)
    if jcol is None:
        raise ZeroC("the fixed left block is zero")

    w = erasure_witness(d_block, tuple(r[jcol] for r in rows))
    z = ctx.zero
    scalar = Matrix(ctx, [[w.a, z], [z, w.a]])
    assert not scalar.trace()
    b_rows = [(z,) * m, (z,) * m]
    b_rows[jcol] = w.R
    big = Matrix(ctx, [list(scalar.rows[i]) + list(b_rows[i]) for i in range(2)]
                 + [list(rows[s]) + list(d_block.rows[s]) for s in range(m)])
    chi = char_poly(big)
    assert chi == Poly.from_roots(ctx, [w.a]) * char_poly(w.bordered)
    assert chi % w.obstruction == Poly.zero(ctx)
    try:
        assert not split_completely(chi).splits
    except UnsupportedDegree:
        pass                            # already certified via the divisor
    return scalar, (b_rows[0], b_rows[1]), big


# ---------------------------------------------------------------------------
# selfadjoint operators for symmetric forms
# ---------------------------------------------------------------------------

def selfadjoint_witness(ctx: FieldCtx, lam: Element):
    """Selfadjoint 3x3 operator whose characteristic polynomial is rootless.

    For a non-square lam, A = [[0,0,0],[0,0,lam],[0,1,0]] is selfadjoint
    for the invertible symmetric form S = [[1,0,0],[0,0,1],[0,1,0]]
    (S A is the diagonal (0, 1, lam)) yet char(A) = t (t^2 - lam) has an
    irreducible quadratic factor.
    """
    lam = ctx.from_int(lam) if isinstance(lam, int) else lam
    if ctx.is_square(lam) is not None:
        raise SquareLambda(f"{ctx.format(lam)} is a square in {ctx.name()}")
    z, o = ctx.zero, ctx.one
    a = Matrix(ctx, [[z, z, z], [z, z, lam], [z, o, z]])
    s = Matrix(ctx, [[o, z, z], [z, z, o], [z, o, z]])
    assert s.is_symmetric() and s.det()
    assert s * a == Matrix.diag(ctx, [z, o, lam])
    chi = char_poly(a)
    assert chi == Poly(ctx, [z, -lam, z, o])
    res = split_completely(chi)
    assert not res.splits
    report = {
        "gram_symmetric": True,
        "gram_invertible": True,
        "product_diagonal": [ctx.format(z), ctx.format(o), ctx.format(lam)],
        "char_poly": format_poly(chi),
        "split_status": res.status,
    }
    return a, s, report


def symmetrize_attempt(a_mat: Matrix, s_mat: Matrix):
    """(P, P A P^-1 symmetric) via orthonormalizing the form, or None.

    Orthogonalizes the form with Gram matrix S by backtracking over
    nonzero 0/1-combinations of the current complement basis (plain
    greedy steps can dead-end in characteristic two), then scales each
    vector by an inverse square root of its form value.  Returns None
    when the orthogonalization gets stuck or a required square root
    does not exist in the field.
    """
    ctx, n = a_mat.ctx, a_mat.n
    if s_mat.n != n:
        raise DimensionMismatch("operator and form sizes differ")
    if not s_mat.is_symmetric() or not s_mat.det():
        raise ValueError("the form must be symmetric and invertible")
    if ctx.char() == 2 and all(not s_mat.rows[i][i] for i in range(n)):
        raise AlternatingGram("alternating form: every vector is isotropic")
    if not (s_mat * a_mat).is_symmetric():
        raise NotSelfadjoint("S * A is not symmetric")

    z, o = ctx.zero, ctx.one

    def form(u, v):
        sv = s_mat.mul_vec(v)
        acc = z
        for ue, se in zip(u, sv):
            if ue and se:
                acc = acc + ue * se
        return acc

    def orthogonalize(cur):
        if not cur:
            return []
        for mask in range(1, 1 << len(cur)):
            w = [z] * n
            for i, v in enumerate(cur):
                if mask >> i & 1:
                    w = [we + ve for we, ve in zip(w, v)]
            w = tuple(w)
            qw = form(w, w)
            if not qw:
                continue
            inv = ctx.invert(qw)
            comp = []
            for u in cur:
                img = tuple(ue - form(u, w) * inv * we for ue, we in zip(u, w))
                if any(img) and not in_rowspan(img, rref(comp, n, ctx)):
                    comp.append(img)
            # w non-isotropic: the form stays nondegenerate on w-perp
            assert len(comp) == len(cur) - 1
            rest = orthogonalize(comp)
            if rest is not None:
                return [w] + rest
        return None

    start = [tuple(o if j == i else z for j in range(n)) for i in range(n)]
    basis = orthogonalize(start)
    if basis is None:
        return None
    cols = []
    for w in basis:
        root = ctx.is_square(form(w, w))
        if root is None:
            return None
        inv = ctx.invert(root)
        cols.append(tuple(inv * e for e in w))
    wmat = Matrix(ctx, [[cols[j][i] for j in range(n)] for i in range(n)])
    assert wmat.transpose() * s_mat * wmat == Matrix.identity(ctx, n)
    p = wmat.inverse()
    sym = p * a_mat * wmat
    assert sym.is_symmetric()
    assert char_poly(sym) == char_poly(a_mat)
    return p, sym
