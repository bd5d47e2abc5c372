"""Univariate polynomials over a field context and splitting decisions.

The characteristic polynomial goes through the Berkowitz algorithm,
which uses ring operations only and is therefore safe in characteristic
2.  The splitting oracle is exact per field kind: exhaustive trial
roots with deflation over finite fields, rational-root candidates on
the primitive integer form over Q, and root-existence analysis for the
degree <= 3 shapes supported over rational function fields.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Optional

from .field import (
    DivisionByZero,
    Element,
    FieldCtx,
    ParseError,
    RationalFunctionField,
)
from .matspace import Matrix, rref, solve


class UnsupportedDegree(Exception):
    """Splitting question outside the decidable range for this field."""


class Poly:
    """Dense polynomial; coefficients ascending, trailing zeros stripped."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        cs = [ctx.from_int(c) if isinstance(c, int) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [])

    @classmethod
    def t(cls, ctx):
        return cls(ctx, [0, 1])

    @classmethod
    def from_roots(cls, ctx, roots) -> "Poly":
        out = cls(ctx, [1])
        for r in roots:
            out = out * cls(ctx, [-r, ctx.one])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ctx.one

    def __getitem__(self, i: int) -> Element:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ctx.zero

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ctx, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ctx, [self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return Poly(self.ctx, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Element):
            return Poly(self.ctx, [c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.ctx)
        out = [self.ctx.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(self.ctx, out)

    def __divmod__(self, other: "Poly"):
        if not other.coeffs:
            raise DivisionByZero("polynomial division by zero")
        inv = self.ctx.invert(other.coeffs[-1])
        rem = list(self.coeffs)
        deg_d = other.degree
        quot = [self.ctx.zero] * max(len(rem) - deg_d, 0)
        while len(rem) > deg_d:
            if not rem[-1]:
                rem.pop()
                continue
            k = len(rem) - 1 - deg_d
            c = rem[-1] * inv
            quot[k] = c
            for j in range(deg_d + 1):
                rem[k + j] = rem[k + j] - c * other.coeffs[j]
            rem.pop()
        return Poly(self.ctx, quot), Poly(self.ctx, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * self.ctx.invert(self.coeffs[-1])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b.coeffs:
            a, b = b, a % b
        return a.monic()

    def lcm(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.ctx)
        return ((self * other) // self.gcd(other)).monic()

    def __call__(self, x: Element) -> Element:
        acc = self.ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.ctx is self.ctx
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# text form: `t^3 - t + 2`
# ---------------------------------------------------------------------------

_POLY_TERM_RE = re.compile(r"^(?P<coef>.+?)?\*?t(\^(?P<exp>\d+))?$")


def parse_poly(text: str, ctx: FieldCtx, var: str = "t") -> Poly:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    terms: list[tuple[int, str]] = []
    sign, cur, depth = 1, "", 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur:
            terms.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
            continue
        if ch in "+-" and depth == 0 and not cur:
            sign = sign if ch == "+" else -sign
            continue
        cur += ch
    if not cur:
        raise ParseError(f"dangling sign in {text!r}")
    terms.append((sign, cur))
    coeffs: dict[int, Element] = {}
    for sgn, term in terms:
        if var in term:
            m = _POLY_TERM_RE.match(term.replace(var, "t"))
            if not m:
                raise ParseError(f"bad term {term!r}")
            coef_s = m.group("coef")
            exp = int(m.group("exp")) if m.group("exp") else 1
            coef = ctx.one if coef_s is None else _parse_coef(coef_s, ctx)
        else:
            exp, coef = 0, _parse_coef(term, ctx)
        if sgn < 0:
            coef = -coef
        coeffs[exp] = coeffs.get(exp, ctx.zero) + coef
    out = [ctx.zero] * (max(coeffs) + 1 if coeffs else 0)
    for e, c in coeffs.items():
        out[e] = c
    return Poly(ctx, out)


def _parse_coef(s: str, ctx: FieldCtx) -> Element:
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        for j, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and j < len(s) - 1:
                return ctx.parse(s)
        s = s[1:-1]
    return ctx.parse(s)


def format_poly(f: Poly, var: str = "t") -> str:
    if not f.coeffs:
        return "0"
    ctx = f.ctx
    parts: list[str] = []
    for e in range(f.degree, -1, -1):
        c = f[e]
        if not c:
            continue
        cs = ctx.format(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if e == 0:
            body = cs
        else:
            tpart = var if e == 1 else f"{var}^{e}"
            if cs == "1":
                body = tpart
            elif any(ch in cs for ch in "+/") or "x" in cs:
                body = f"({cs})*{tpart}"
            else:
                body = f"{cs}{tpart}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# characteristic, companion, minimal polynomial
# ---------------------------------------------------------------------------

def char_poly(m: Matrix) -> Poly:
    """det(tI - M) via the Berkowitz vector recursion (division free)."""
    ctx = m.ctx
    n = m.n
    if n == 0:
        return Poly(ctx, [1])
    # descending coefficient vectors, built from the trailing 1x1 block up
    vec = [ctx.one, -m.rows[n - 1][n - 1]]
    for size in range(2, n + 1):
        i = n - size
        a = m.rows[i][i]
        row = m.rows[i][i + 1:]
        col = [m.rows[r][i] for r in range(i + 1, n)]
        sub = [r[i + 1:] for r in m.rows[i + 1:]]
        toep = [ctx.one, -a]
        w = list(col)
        for _ in range(size - 1):
            toep.append(-_seq_dot(row, w, ctx))
            w = [_seq_dot(srow, w, ctx) for srow in sub]
        out = []
        for r in range(size + 1):
            acc = ctx.zero
            for j in range(size):
                if 0 <= r - j <= size:
                    if r - j < len(toep) and vec[j]:
                        acc = acc + toep[r - j] * vec[j]
            out.append(acc)
        vec = out
    return Poly(ctx, list(reversed(vec)))


def _seq_dot(u, v, ctx):
    acc = ctx.zero
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def companion(f: Poly) -> Matrix:
    """Companion matrix with ones on the subdiagonal, char poly = f."""
    if not f.is_monic() or f.degree < 1:
        raise ValueError("companion needs a monic polynomial of degree >= 1")
    ctx, n = f.ctx, f.degree
    rows = [[ctx.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = ctx.one
    for i in range(n):
        rows[i][n - 1] = -f[i]
    return Matrix(ctx, rows)


def poly_trace(f: Poly) -> Element:
    """Sum of the roots of a monic polynomial: minus the t^(n-1) coefficient."""
    if not f.is_monic():
        raise ValueError("poly_trace needs a monic polynomial")
    return -f[f.degree - 1]


def min_poly(m: Matrix) -> Poly:
    """Minimal polynomial via per-vector annihilators joined by lcm."""
    ctx, n = m.ctx, m.n
    acc = Poly(ctx, [1])
    for i in range(n):
        v = tuple(ctx.one if j == i else ctx.zero for j in range(n))
        chain = [v]
        while True:
            nxt = m.mul_vec(chain[-1])
            if len(rref(chain + [nxt], n, ctx)) == len(chain):
                cols = list(zip(*chain))
                coeffs = solve(cols, nxt, ctx)
                local = Poly(ctx, [-c for c in coeffs] + [ctx.one])
                break
            chain.append(nxt)
        acc = acc.lcm(local)
        if acc.degree == n:
            break
    return acc


# ---------------------------------------------------------------------------
# splitting oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitResult:
    status: str                       # "splits" | "does_not_split"
    roots: tuple[Element, ...]        # multiset, sorted by the field sort key
    witness: Optional[Poly]           # root-free divisor when not split

    @property
    def splits(self) -> bool:
        return self.status == "splits"


def split_completely(f: Poly) -> SplitResult:
    if not f.is_monic() or f.degree < 1:
        raise ValueError("splitting oracle needs a monic polynomial of degree >= 1")
    ctx = f.ctx
    if ctx.is_finite():
        return _split_finite(f)
    if ctx.spec.kind == "rationals":
        return _split_rationals(f)
    if isinstance(ctx, RationalFunctionField):
        return _split_rational_function(f)
    raise UnsupportedDegree(f"no splitting oracle over {ctx.name()}")


def _sorted_roots(roots, ctx):
    return tuple(sorted(roots, key=ctx.sort_key))


def _split_finite(f: Poly) -> SplitResult:
    ctx = f.ctx
    roots = []
    g = f
    while g.degree >= 1:
        root = next((a for a in ctx.elements() if not g(a)), None)
        if root is None:
            return SplitResult("does_not_split", (), _finite_rootfree_factor(g))
        roots.append(root)
        g = g // Poly(ctx, [-root, ctx.one])
    return SplitResult("splits", _sorted_roots(roots, ctx), None)


def _finite_rootfree_factor(g: Poly) -> Poly:
    """Least-degree nontrivial divisor of a root-free g; irreducible since no
    smaller-degree divisor exists."""
    ctx = g.ctx
    elems = list(ctx.elements())
    for d in range(2, g.degree // 2 + 1):
        for low in itertools.product(elems, repeat=d):
            cand = Poly(ctx, list(low) + [ctx.one])
            if not (g % cand).coeffs:
                return cand
    return g


def _split_rationals(f: Poly) -> SplitResult:
    ctx = f.ctx
    roots = []
    g = f
    while g.degree >= 1:
        root = _rational_root(g)
        if root is None:
            return SplitResult("does_not_split", (), g)
        roots.append(root)
        g = g // Poly(ctx, [-root, ctx.one])
    return SplitResult("splits", _sorted_roots(roots, ctx), None)


def _rational_root(g: Poly) -> Optional[Element]:
    ctx = g.ctx
    if not g[0]:
        return ctx.zero
    from fractions import Fraction
    import math
    den_lcm = 1
    for c in g.coeffs:
        den_lcm = den_lcm * c.val.denominator // math.gcd(den_lcm, c.val.denominator)
    ints = [c.val * den_lcm for c in g.coeffs]
    content = 0
    for v in ints:
        content = math.gcd(content, int(v))
    ints = [int(v) // content for v in ints]
    def divisors(n):
        n = abs(n)
        out = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
        return sorted(set(out + [n // d for d in out]))
    cands = set()
    for p in divisors(ints[0]):
        for q in divisors(ints[-1]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for c in sorted(cands):
        e = ctx.parse(str(c))
        if not g(e):
            return e
    return None


def _split_rational_function(f: Poly) -> SplitResult:
    ctx = f.ctx
    if f.degree > 3:
        raise UnsupportedDegree(f"degree {f.degree} over {ctx.name()}")
    if f.degree == 1:
        return SplitResult("splits", (-f[0],), None)
    if f.degree == 3:
        if f[0]:
            raise UnsupportedDegree(
                f"cubic with nonzero constant term over {ctx.name()}")
        sub = _split_rational_function(Poly(ctx, list(f.coeffs[1:])))
        if not sub.splits:
            return SplitResult("does_not_split", (), sub.witness)
        return SplitResult("splits",
                           _sorted_roots(sub.roots + (ctx.zero,), ctx), None)
    b, c = f[1], f[0]
    if ctx.char() != 2:
        disc = b * b - 4 * c
        w = ctx.is_square(disc)
        if w is None:
            return SplitResult("does_not_split", (), f)
        half = ctx.invert(ctx.from_int(2))
        roots = ((-b + w) * half, (-b - w) * half)
        return SplitResult("splits", _sorted_roots(roots, ctx), None)
    if not b:
        w = ctx.is_square(-c)
        if w is None:
            return SplitResult("does_not_split", (), f)
        return SplitResult("splits", _sorted_roots((w, w), ctx), None)
    s = _artin_schreier_root(c / (b * b), ctx)
    if s is None:
        return SplitResult("does_not_split", (), f)
    roots = (b * s, b * s + b)
    assert not f(roots[0]) and not f(roots[1])
    return SplitResult("splits", _sorted_roots(roots, ctx), None)


def _artin_schreier_root(gamma: Element, ctx: RationalFunctionField):
    """Solve s^2 + s = gamma over F_2(x), or report None.

    Writing s = u/w in lowest terms forces w^2 to be the denominator of
    gamma; the numerator equation u^2 + u w = g is F_2-linear in the
    coefficients of u, so an exact linear solve settles existence.
    """
    from .field import _psqrt, _pmul, _padd
    g, h = gamma.val
    p = ctx.p
    w = _psqrt(h, p)
    if w is None:
        return None
    deg_u_max = max(len(g) - 1, len(w) - 1, 0)
    width = deg_u_max + 1
    span = 2 * deg_u_max + 1
    rows = []
    for i in range(width):
        img = [0] * span
        if 2 * i < span:
            img[2 * i] ^= 1
        for j, wc in enumerate(w):
            if wc and i + j < span:
                img[i + j] ^= 1
        rows.append(img)
    target = [g[k] if k < len(g) else 0 for k in range(span)]
    sol = _gf2_solve(rows, target, width, span)
    if sol is None:
        return None
    u = tuple(sol)
    s = ctx.from_poly_tuple(u, tuple(w))
    assert s * s + s == gamma
    return s


def _gf2_solve(rows, target, width, span):
    """Solve sum_i x_i rows[i] = target over F_2 by elimination on columns."""
    aug = [[rows[i][k] for i in range(width)] + [target[k]] for k in range(span)]
    pivots = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, span) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(span):
            if i != r and aug[i][c]:
                aug[i] = [a ^ b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, span):
        if aug[i][width]:
            return None
    x = [0] * width
    for row, c in zip(aug[:r], pivots):
        x[c] = row[width]
    return x
