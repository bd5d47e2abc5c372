"""Exact arithmetic over the supported coefficient fields.

Four kinds of field are available: prime fields, prime-power extensions
built as F_p[t]/(m) for an irreducible monic m, the rationals, and
univariate rational function fields F_p(x).  Every element is stored in
a canonical form (residues, fixed-length coefficient tuples, reduced
fractions, reduced numerator/denominator pairs with monic denominator),
so structural equality decides field equality and elements are hashable.

Field contexts are cached per spec: ``make_field`` returns the same
object for equal specs, which keeps element mixing checks cheap.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional


class FieldError(Exception):
    pass


class NonPrime(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class DivisionByZero(FieldError):
    pass


class InfiniteField(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class ParseError(FieldError):
    pass


# ---------------------------------------------------------------------------
# dense polynomials over F_p as int tuples, ascending, no trailing zeros
# ---------------------------------------------------------------------------

def _pstrip(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _pstrip([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                    for i in range(n)])


def _pneg(a, p):
    return tuple((-x) % p for x in a)


def _psub(a, b, p):
    return _padd(a, _pneg(b, p), p)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pstrip(out)


def _pdivmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    rem = list(a)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(rem) >= len(b) and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(b):
            break
        k = len(rem) - len(b)
        c = rem[-1] * inv_lead % p
        quot[k] = c
        for j, y in enumerate(b):
            rem[k + j] = (rem[k + j] - c * y) % p
    return _pstrip(quot), _pstrip(rem)


def _pmonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return tuple(x * inv % p for x in a)


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return _pmonic(a, p)


def _pxgcd(a, b, p):
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if not r0:
        return (), s0, t0
    inv = pow(r0[-1], -1, p)
    scale = (inv,)
    return _pmonic(r0, p), _pmul(s0, scale, p), _pmul(t0, scale, p)


def _peval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _monic_polys(p: int, deg: int) -> Iterator[tuple[int, ...]]:
    """Monic degree-`deg` polynomials over F_p in ascending encoding order."""
    for enc in range(p ** deg):
        low, e = [], enc
        for _ in range(deg):
            low.append(e % p)
            e //= p
        yield tuple(low) + (1,)


def _pirreducible(m, p) -> bool:
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _pdivmod(m, cand, p)[1]:
                return False
    return True


def _psqrt(s, p):
    """Square root of a monic polynomial over F_p, or None."""
    if not s:
        return ()
    deg = len(s) - 1
    if deg % 2:
        return None
    m = deg // 2
    if p == 2:
        if any(s[i] for i in range(1, len(s), 2)):
            return None
        w = tuple(s[2 * i] for i in range(m + 1))
        return w if _pmul(w, w, p) == s else None
    w = [0] * (m + 1)
    w[m] = 1
    inv2 = pow(2, -1, p)
    for j in range(m - 1, -1, -1):
        t = s[m + j]
        for i in range(j + 1, m + 1):
            k = m + j - i
            if k <= i or k > m:
                continue
            t = (t - 2 * w[i] * w[k]) % p
        if (m + j) % 2 == 0:
            h = (m + j) // 2
            if h > j:
                t = (t - w[h] * w[h]) % p
        w[j] = t * inv2 % p
    w = tuple(w)
    return w if _pmul(w, w, p) == s else None


_TERM_RE = re.compile(r"^(?P<coef>\d+)?\s*\*?\s*(?P<var>[a-z])?(\^(?P<exp>\d+))?$")


def _pparse(text: str, p: int, var: str) -> tuple[int, ...]:
    """Parse a polynomial literal like ``x^2+2x+1`` over F_p."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial literal")
    terms: list[tuple[int, str]] = []
    sign, cur = 1, ""
    for ch in s:
        if ch in "+-" and cur:
            terms.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not cur:
            sign = sign if ch == "+" else -sign
        else:
            cur += ch
    if not cur:
        raise ParseError(f"dangling sign in {text!r}")
    terms.append((sign, cur))
    coeffs: dict[int, int] = {}
    for sgn, term in terms:
        m = _TERM_RE.match(term)
        if not m or (m.group("var") and m.group("var") != var) or not term:
            raise ParseError(f"bad term {term!r} in {text!r}")
        coef = int(m.group("coef")) if m.group("coef") else 1
        if m.group("var"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            if m.group("exp"):
                raise ParseError(f"bad term {term!r} in {text!r}")
            exp = 0
        coeffs[exp] = (coeffs.get(exp, 0) + sgn * coef) % p
    out = [0] * (max(coeffs) + 1 if coeffs else 0)
    for e, c in coeffs.items():
        out[e] = c
    return _pstrip(out)


def _pfmt(a, var: str) -> str:
    if not a:
        return "0"
    parts = []
    for e in range(len(a) - 1, -1, -1):
        c = a[e]
        if not c:
            continue
        if e == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            head += var if e == 1 else f"{var}^{e}"
            parts.append(head)
    return "+".join(parts)


# ---------------------------------------------------------------------------
# field specs and elements
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Canonical description of a supported field."""

    kind: str                       # prime | prime_power | rationals | rational_function
    p: Optional[int] = None
    k: int = 1
    modulus: Optional[tuple[int, ...]] = None
    base_char: Optional[int] = None


class Element:
    """Immutable scalar belonging to exactly one field context."""

    __slots__ = ("ctx", "val")

    def __init__(self, ctx: "FieldCtx", val):
        self.ctx = ctx
        self.val = val

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.ctx is not self.ctx:
                raise FieldMismatch(f"{self.ctx.name()} vs {other.ctx.name()}")
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Element(self.ctx, self.ctx._add(self.val, o.val))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Element(self.ctx, self.ctx._add(self.val, self.ctx._neg(o.val)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Element(self.ctx, self.ctx._add(o.val, self.ctx._neg(self.val)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Element(self.ctx, self.ctx._mul(self.val, o.val))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * self.ctx.invert(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.ctx.invert(self)

    def __neg__(self):
        return Element(self.ctx, self.ctx._neg(self.val))

    def __pow__(self, e: int):
        if e < 0:
            return self.ctx.invert(self) ** (-e)
        acc, base = self.ctx.one, self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        return (isinstance(other, Element) and other.ctx is self.ctx
                and other.val == self.val)

    def __hash__(self):
        return hash((id(self.ctx), self.val))

    def __bool__(self):
        return self.val != self.ctx.zero.val

    def __repr__(self):
        return self.ctx.format(self)


class FieldCtx:
    """Shared behaviour of the field contexts; subclasses fix the value type."""

    kind: str

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.zero = Element(self, self._zero())
        self.one = Element(self, self._one())

    # -- subclass hooks on raw values ------------------------------------
    def _zero(self):
        raise NotImplementedError

    def _one(self):
        raise NotImplementedError

    def _add(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    # -- public api -------------------------------------------------------
    def name(self) -> str:
        raise NotImplementedError

    def from_int(self, n: int) -> Element:
        raise NotImplementedError

    def invert(self, a: Element) -> Element:
        if not a:
            raise DivisionByZero(f"inverting zero in {self.name()}")
        return Element(self, self._inv(a.val))

    def char(self) -> int:
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def order(self) -> int:
        raise InfiniteField(self.name())

    def elements(self) -> Iterator[Element]:
        raise InfiniteField(f"cannot enumerate {self.name()}")

    def encode(self, a: Element) -> int:
        raise InfiniteField(self.name())

    def decode(self, i: int) -> Element:
        raise InfiniteField(self.name())

    def sort_key(self, a: Element):
        raise NotImplementedError

    def parse(self, text: str) -> Element:
        raise NotImplementedError

    def format(self, a: Element) -> str:
        raise NotImplementedError

    def is_square(self, a: Element) -> Optional[Element]:
        raise NotImplementedError

    def predicates(self) -> dict[str, bool]:
        raise NotImplementedError

    def random_element(self, rng, bound: int = 10) -> Element:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"<field {self.name()}>"


def _finite_predicates(ctx: "FieldCtx") -> dict[str, bool]:
    elems = list(ctx.elements())
    squares = {(a * a) for a in elems}
    nrc = len(squares) < len(elems)
    pyth = all((a * a + b * b) in squares for a in elems for b in elems)
    quad_closed = True
    for b in elems:
        for c in elems:
            if not any(x * x + b * x + c == ctx.zero for x in elems):
                quad_closed = False
                break
        if not quad_closed:
            break
    p = ctx.char()
    perfect = {(a ** p) for a in elems} == set(elems)
    return {
        "is_NRC": nrc,
        "is_quadratically_closed": quad_closed,
        "is_pythagorean": pyth,
        "is_perfect": perfect,
    }


class PrimeField(FieldCtx):
    """F_p with residue values in [0, p)."""

    kind = "prime"

    def __init__(self, spec: FieldSpec):
        if not _is_prime(spec.p):
            raise NonPrime(str(spec.p))
        self.p = spec.p
        super().__init__(spec)

    def _zero(self):
        return 0

    def _one(self):
        return 1 % self.p

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _inv(self, a):
        return pow(a, -1, self.p)

    def name(self):
        return f"F{self.p}"

    def from_int(self, n):
        return Element(self, n % self.p)

    def char(self):
        return self.p

    def is_finite(self):
        return True

    def order(self):
        return self.p

    def elements(self):
        return (Element(self, i) for i in range(self.p))

    def encode(self, a):
        return a.val

    def decode(self, i):
        return Element(self, i % self.p)

    def sort_key(self, a):
        return a.val

    def parse(self, text):
        try:
            return self.from_int(int(text.strip()))
        except ValueError as exc:
            raise ParseError(f"bad {self.name()} literal {text!r}") from exc

    def format(self, a):
        return str(a.val)

    def is_square(self, a):
        for w in self.elements():
            if w * w == a:
                return w
        return None

    def predicates(self):
        return _finite_predicates(self)

    def random_element(self, rng, bound=10):
        return Element(self, rng.randrange(self.p))


class PrimePowerField(FieldCtx):
    """F_{p^k} as F_p[t]/(m); values are length-k coefficient tuples."""

    kind = "prime_power"

    def __init__(self, spec: FieldSpec):
        if not _is_prime(spec.p):
            raise NonPrime(str(spec.p))
        if spec.k < 2:
            raise FieldError("prime_power needs k >= 2")
        self.p, self.k = spec.p, spec.k
        modulus = spec.modulus or default_modulus(spec.p, spec.k)
        if len(modulus) != spec.k + 1 or modulus[-1] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {spec.k}")
        if not _pirreducible(modulus, spec.p):
            raise ReducibleModulus(str(modulus))
        self.modulus = modulus
        spec = FieldSpec(kind="prime_power", p=spec.p, k=spec.k, modulus=modulus)
        super().__init__(spec)

    def _pad(self, c):
        return tuple(c) + (0,) * (self.k - len(c))

    def _zero(self):
        return (0,) * self.k

    def _one(self):
        return self._pad((1,))

    def _add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _neg(self, a):
        return tuple((-x) % self.p for x in a)

    def _mul(self, a, b):
        prod = _pmul(_pstrip(list(a)), _pstrip(list(b)), self.p)
        return self._pad(_pdivmod(prod, self.modulus, self.p)[1])

    def _inv(self, a):
        g, s, _ = _pxgcd(_pstrip(list(a)), self.modulus, self.p)
        if g != (1,):
            raise DivisionByZero("non-invertible residue")
        return self._pad(_pdivmod(s, self.modulus, self.p)[1])

    def name(self):
        return f"F{self.p ** self.k}"

    def from_int(self, n):
        return Element(self, self._pad((n % self.p,)))

    def char(self):
        return self.p

    def is_finite(self):
        return True

    def order(self):
        return self.p ** self.k

    def elements(self):
        return (self.decode(i) for i in range(self.order()))

    def encode(self, a):
        return sum(c * self.p ** i for i, c in enumerate(a.val))

    def decode(self, i):
        i %= self.order()
        coeffs = []
        for _ in range(self.k):
            coeffs.append(i % self.p)
            i //= self.p
        return Element(self, tuple(coeffs))

    def sort_key(self, a):
        return self.encode(a)

    def parse(self, text):
        try:
            return self.decode(int(text.strip()))
        except ValueError as exc:
            raise ParseError(f"bad {self.name()} literal {text!r}") from exc

    def format(self, a):
        return str(self.encode(a))

    def is_square(self, a):
        for w in self.elements():
            if w * w == a:
                return w
        return None

    def predicates(self):
        return _finite_predicates(self)

    def random_element(self, rng, bound=10):
        return self.decode(rng.randrange(self.order()))


class RationalField(FieldCtx):
    """Q with arbitrary-precision Fraction values."""

    kind = "rationals"

    def _zero(self):
        return Fraction(0)

    def _one(self):
        return Fraction(1)

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        return 1 / a

    def name(self):
        return "Q"

    def from_int(self, n):
        return Element(self, Fraction(n))

    def char(self):
        return 0

    def sort_key(self, a):
        return (a.val.numerator, a.val.denominator)

    def parse(self, text):
        try:
            return Element(self, Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {text!r}") from exc

    def format(self, a):
        return str(a.val)

    def is_square(self, a):
        if a.val < 0:
            return None
        num, den = a.val.numerator, a.val.denominator
        sn, sd = math.isqrt(num), math.isqrt(den)
        if sn * sn == num and sd * sd == den:
            return Element(self, Fraction(sn, sd))
        return None

    def predicates(self):
        # squaring misses 2; t^2-2 has no root; 1^2+1^2 = 2 is not a square;
        # characteristic zero fields are perfect.
        return {
            "is_NRC": True,
            "is_quadratically_closed": False,
            "is_pythagorean": False,
            "is_perfect": True,
        }

    def random_element(self, rng, bound=10):
        return Element(self, Fraction(rng.randint(-bound, bound),
                                      rng.randint(1, bound)))


class RationalFunctionField(FieldCtx):
    """F_p(x); values are reduced (numerator, monic denominator) pairs."""

    kind = "rational_function"

    def __init__(self, spec: FieldSpec):
        if not _is_prime(spec.base_char):
            raise NonPrime(str(spec.base_char))
        self.p = spec.base_char
        super().__init__(spec)

    def _norm(self, num, den):
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return ((), (1,))
        g = _pgcd(num, den, self.p)
        if len(g) > 1 or g != (1,):
            num = _pdivmod(num, g, self.p)[0]
            den = _pdivmod(den, g, self.p)[0]
        inv = pow(den[-1], -1, self.p)
        num = tuple(c * inv % self.p for c in num)
        den = _pmonic(den, self.p)
        return (num, den)

    def _zero(self):
        return ((), (1,))

    def _one(self):
        return ((1,), (1,))

    def _add(self, a, b):
        (an, ad), (bn, bd) = a, b
        num = _padd(_pmul(an, bd, self.p), _pmul(bn, ad, self.p), self.p)
        return self._norm(num, _pmul(ad, bd, self.p))

    def _neg(self, a):
        return (_pneg(a[0], self.p), a[1])

    def _mul(self, a, b):
        return self._norm(_pmul(a[0], b[0], self.p), _pmul(a[1], b[1], self.p))

    def _inv(self, a):
        return self._norm(a[1], a[0])

    def name(self):
        return f"F{self.p}(x)"

    def from_int(self, n):
        n %= self.p
        return Element(self, (((n,) if n else ()), (1,)))

    def from_poly_tuple(self, num, den=(1,)) -> Element:
        return Element(self, self._norm(_pstrip(list(num)), _pstrip(list(den))))

    def x(self) -> Element:
        return Element(self, ((0, 1), (1,)))

    def char(self):
        return self.p

    def sort_key(self, a):
        num, den = a.val
        return (len(den), den, len(num), num)

    def parse(self, text):
        s = text.strip().replace(" ", "")
        depth, split_at = 0, None
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                if split_at is not None:
                    raise ParseError(f"ambiguous fraction {text!r}")
                split_at = i
        def strip_parens(u: str) -> str:
            while u.startswith("(") and u.endswith(")"):
                depth = 0
                for j, ch in enumerate(u):
                    depth += ch == "("
                    depth -= ch == ")"
                    if depth == 0 and j < len(u) - 1:
                        return u
                u = u[1:-1]
            return u
        if split_at is None:
            num, den = _pparse(strip_parens(s), self.p, "x"), (1,)
        else:
            num = _pparse(strip_parens(s[:split_at]), self.p, "x")
            den = _pparse(strip_parens(s[split_at + 1:]), self.p, "x")
        return Element(self, self._norm(num, den))

    def format(self, a):
        num, den = a.val
        num_s = _pfmt(num, "x")
        if den == (1,):
            return num_s
        den_s = _pfmt(den, "x")
        if "+" in num_s:
            num_s = f"({num_s})"
        if "+" in den_s:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def is_square(self, a):
        num, den = a.val
        if not num:
            return self.zero
        lc = num[-1]
        base = PrimeField(FieldSpec(kind="prime", p=self.p))
        lc_root = base.is_square(Element(base, lc))
        if lc_root is None:
            return None
        sn = _psqrt(_pmonic(num, self.p), self.p)
        sd = _psqrt(den, self.p)
        if sn is None or sd is None:
            return None
        root = Element(self, self._norm(_pmul((lc_root.val,), sn, self.p), sd))
        assert root * root == a
        return root

    def predicates(self):
        # x has no square root, t^2-x has no root, and x has no p-th root.
        pyth = self.p == 2
        if not pyth:
            base = PrimeField(FieldSpec(kind="prime", p=self.p))
            pyth = base.predicates()["is_pythagorean"]
        return {
            "is_NRC": True,
            "is_quadratically_closed": False,
            "is_pythagorean": pyth,
            "is_perfect": False,
        }

    def random_element(self, rng, bound=10):
        num = _pstrip([rng.randrange(self.p) for _ in range(3)])
        den = ()
        while not den:
            den = _pstrip([rng.randrange(self.p) for _ in range(2)])
        return Element(self, self._norm(num, den))


# ---------------------------------------------------------------------------
# construction and spec parsing
# ---------------------------------------------------------------------------

_MODULUS_CACHE: dict[tuple[int, int], tuple[int, ...]] = {}
_CTX_CACHE: dict[FieldSpec, FieldCtx] = {}


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least irreducible monic degree-k polynomial over F_p,
    ordered by the ascending base-p encoding of the non-leading coefficients."""
    key = (p, k)
    if key not in _MODULUS_CACHE:
        for cand in _monic_polys(p, k):
            if _pirreducible(cand, p):
                _MODULUS_CACHE[key] = cand
                break
        else:
            raise FieldError(f"no irreducible polynomial of degree {k} over F{p}")
    return _MODULUS_CACHE[key]


def make_field(spec: FieldSpec) -> FieldCtx:
    if spec.kind == "prime_power" and spec.modulus is None:
        spec = FieldSpec(kind="prime_power", p=spec.p, k=spec.k,
                         modulus=default_modulus(spec.p, spec.k))
    if spec in _CTX_CACHE:
        return _CTX_CACHE[spec]
    if spec.kind == "prime":
        ctx = PrimeField(spec)
    elif spec.kind == "prime_power":
        ctx = PrimePowerField(spec)
    elif spec.kind == "rationals":
        ctx = RationalField(spec)
    elif spec.kind == "rational_function":
        ctx = RationalFunctionField(spec)
    else:
        raise FieldError(f"unknown field kind {spec.kind!r}")
    _CTX_CACHE[ctx.spec] = ctx
    _CTX_CACHE[spec] = ctx
    return ctx


_SPEC_RE = re.compile(r"^F(\d+)(\(x\))?$")


def spec_from_string(text: str) -> FieldSpec:
    """Parse a field spec string: ``F3``, ``F9``, ``Q``, ``F2(x)``."""
    s = text.strip()
    if s == "Q":
        return FieldSpec(kind="rationals")
    m = _SPEC_RE.match(s)
    if not m:
        raise ParseError(f"bad field spec {text!r}")
    q = int(m.group(1))
    if m.group(2):
        return FieldSpec(kind="rational_function", base_char=q)
    if _is_prime(q):
        return FieldSpec(kind="prime", p=q)
    for p in range(2, q):
        if _is_prime(p):
            k = 0
            qq = q
            while qq % p == 0:
                qq //= p
                k += 1
            if qq == 1 and k >= 2:
                return FieldSpec(kind="prime_power", p=p, k=k)
    raise ParseError(f"{q} is not a prime power")


def field_by_name(text: str) -> FieldCtx:
    return make_field(spec_from_string(text))


# -- spec-level operation wrappers ------------------------------------------

def invert(a: Element) -> Element:
    return a.ctx.invert(a)


def is_square(a: Element) -> Optional[Element]:
    return a.ctx.is_square(a)


def field_predicates(ctx: FieldCtx) -> dict[str, bool]:
    return ctx.predicates()


def enumerate_elements(ctx: FieldCtx) -> Iterator[Element]:
    return ctx.elements()
