"""Polynomial layer: arithmetic, characteristic polynomial, splitting."""

import random

import pytest

from trimat.field import field_by_name
from trimat.matspace import Matrix, random_matrix
from trimat.poly import (
    Poly,
    UnsupportedDegree,
    char_poly,
    companion,
    format_poly,
    min_poly,
    parse_poly,
    poly_trace,
    split_completely,
)


def P(ctx, coeffs):
    return Poly(ctx, coeffs)


def char_poly_oracle(m: Matrix) -> Poly:
    """det(tI - M) by cofactor expansion on polynomial entries."""
    ctx = m.ctx
    t = Poly.t(ctx)
    entries = [[t - P(ctx, [m.rows[i][j]]) if i == j else -P(ctx, [m.rows[i][j]])
                for j in range(m.n)] for i in range(m.n)]

    def det(rows):
        k = len(rows)
        if k == 1:
            return rows[0][0]
        acc = Poly.zero(ctx)
        for j in range(k):
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = rows[0][j] * det(minor)
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    return det(entries)


class TestArithmetic:
    def test_degree_and_normalization(self):
        f5 = field_by_name("F5")
        assert P(f5, [1, 2, 0, 0]).degree == 1
        assert Poly.zero(f5).degree == -1
        assert P(f5, [0, 5]).degree == -1

    def test_divmod_round_trip(self):
        rng = random.Random(31)
        for name in ["F3", "F4", "Q", "F2(x)"]:
            ctx = field_by_name(name)
            for _ in range(20):
                a = P(ctx, [ctx.random_element(rng) for _ in range(5)])
                b = Poly.zero(ctx)
                while b.degree < 1:
                    b = P(ctx, [ctx.random_element(rng) for _ in range(3)])
                q, r = divmod(a, b)
                assert q * b + r == a
                assert r.degree < b.degree

    def test_gcd_and_lcm(self):
        q = field_by_name("Q")
        a = Poly.from_roots(q, [q.from_int(1), q.from_int(2)])
        b = Poly.from_roots(q, [q.from_int(1), q.from_int(3)])
        assert a.gcd(b) == Poly.from_roots(q, [q.from_int(1)])
        lcm = a.lcm(b)
        assert lcm == Poly.from_roots(q, [q.from_int(i) for i in (1, 2, 3)])

    def test_evaluation(self):
        f7 = field_by_name("F7")
        f = parse_poly("t^2 + 3t + 1", f7)
        assert f(f7.from_int(2)) == f7.from_int(4)

    def test_from_roots_expands(self):
        f5 = field_by_name("F5")
        f = Poly.from_roots(f5, [f5.from_int(1), f5.from_int(4)])
        assert f == parse_poly("t^2 - 5t + 4", f5) == parse_poly("t^2+4", f5)


class TestParseFormat:
    def test_fixture(self):
        q = field_by_name("Q")
        f = parse_poly("t^3 - t + 2", q)
        assert [c.val for c in f.coeffs] == [2, -1, 0, 1]
        assert format_poly(f) == "t^3 - t + 2"

    def test_rational_coefficients(self):
        q = field_by_name("Q")
        f = parse_poly("t^2 - 3/2*t + 1/2", q)
        assert f(q.parse("1/2")) == q.zero

    def test_function_field_coefficients(self):
        fx = field_by_name("F2(x)")
        f = parse_poly("t^2 + (x+1)*t + x", fx)
        assert f(fx.parse("x")) == fx.zero
        assert parse_poly(format_poly(f), fx) == f

    def test_round_trip_random(self):
        rng = random.Random(17)
        for name in ["F3", "F4", "F9", "Q", "F2(x)", "F3(x)"]:
            ctx = field_by_name(name)
            for _ in range(25):
                f = P(ctx, [ctx.random_element(rng) for _ in range(4)])
                assert parse_poly(format_poly(f), ctx) == f

    def test_zero_and_identity(self):
        f3 = field_by_name("F3")
        assert format_poly(Poly.zero(f3)) == "0"
        assert format_poly(Poly.t(f3)) == "t"
        assert parse_poly("t", f3) == Poly.t(f3)

    def test_bad_input(self):
        from trimat.field import ParseError
        f3 = field_by_name("F3")
        for bad in ["", "t^", "+", "t+"]:
            with pytest.raises(ParseError):
                parse_poly(bad, f3)


class TestCharPoly:
    def test_two_by_two_fixture(self):
        q = field_by_name("Q")
        swap = Matrix(q, [[0, 1], [1, 0]])
        assert char_poly(swap) == parse_poly("t^2 - 1", q)
        a = Matrix(q, [[1, 2], [3, 4]])
        assert char_poly(a) == parse_poly("t^2 - 5t - 2", q)

    def test_against_cofactor_oracle(self):
        rng = random.Random(41)
        for name in ["F2", "F3", "F4", "F5", "Q", "F2(x)"]:
            ctx = field_by_name(name)
            for n in (1, 2, 3, 4):
                for _ in range(6):
                    m = random_matrix(ctx, n, rng)
                    assert char_poly(m) == char_poly_oracle(m)

    def test_trace_and_det_coefficients(self):
        rng = random.Random(43)
        f7 = field_by_name("F7")
        for _ in range(20):
            m = random_matrix(f7, 3, rng)
            chi = char_poly(m)
            assert chi.is_monic() and chi.degree == 3
            assert chi[2] == -m.trace()
            assert chi[0] == -m.det()
            assert poly_trace(chi) == m.trace()

    def test_upper_triangular_roots(self):
        f5 = field_by_name("F5")
        m = Matrix(f5, [[1, 2, 3], [0, 2, 4], [0, 0, 1]])
        assert char_poly(m) == Poly.from_roots(
            f5, [f5.from_int(1), f5.from_int(2), f5.from_int(1)])


class TestCompanion:
    def test_subdiagonal_convention(self):
        q = field_by_name("Q")
        f = parse_poly("t^2 - 1", q)
        assert companion(f) == Matrix(q, [[0, 1], [1, 0]])

    def test_char_poly_round_trip(self):
        rng = random.Random(47)
        for name in ["F3", "F4", "Q"]:
            ctx = field_by_name(name)
            for d in (1, 2, 3, 4):
                f = P(ctx, [ctx.random_element(rng) for _ in range(d)] + [ctx.one])
                assert char_poly(companion(f)) == f

    def test_rejects_non_monic(self):
        q = field_by_name("Q")
        with pytest.raises(ValueError):
            companion(parse_poly("2t^2 - 1", q))


class TestMinPoly:
    def test_fixtures(self):
        f3 = field_by_name("F3")
        assert min_poly(Matrix.diag(f3, [1, 1, 2])) == Poly.from_roots(
            f3, [f3.one, f3.from_int(2)])
        nil = Matrix(f3, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert min_poly(nil) == P(f3, [0, 0, 0, 1])
        assert min_poly(Matrix.identity(f3, 3)) == parse_poly("t - 1", f3)

    def test_divides_char_poly(self):
        rng = random.Random(53)
        for name in ["F2", "F3", "F4", "Q"]:
            ctx = field_by_name(name)
            for _ in range(10):
                m = random_matrix(ctx, 3, rng)
                mu, chi = min_poly(m), char_poly(m)
                assert not (chi % mu).coeffs
                zero = Matrix.zeros(ctx, 3)
                acc = Matrix.zeros(ctx, 3)
                for i, c in enumerate(mu.coeffs):
                    acc = acc + (m ** i) * c
                assert acc == zero


def split_oracle_finite(f):
    """Roots with multiplicity by exhaustive evaluation and division."""
    ctx = f.ctx
    roots = []
    for a in ctx.elements():
        g = f
        while g.degree >= 1 and not g(a):
            roots.append(a)
            g = g // Poly(ctx, [-a, ctx.one])
    roots.sort(key=ctx.sort_key)
    return roots


class TestSplitFinite:
    def test_exhaustive_quadratics(self):
        for name in ["F2", "F3", "F4", "F5"]:
            ctx = field_by_name(name)
            for b in ctx.elements():
                for c in ctx.elements():
                    f = P(ctx, [c, b, ctx.one])
                    res = split_completely(f)
                    roots = split_oracle_finite(f)
                    if len(roots) == 2:
                        assert res.splits and list(res.roots) == roots
                    else:
                        assert not res.splits
                        assert res.witness.degree == 2

    def test_random_higher_degree(self):
        rng = random.Random(59)
        for name in ["F3", "F4", "F8"]:
            ctx = field_by_name(name)
            for d in (3, 4, 5):
                for _ in range(10):
                    f = P(ctx, [ctx.random_element(rng) for _ in range(d)]
                          + [ctx.one])
                    res = split_completely(f)
                    roots = split_oracle_finite(f)
                    if res.splits:
                        assert list(res.roots) == roots and len(roots) == d
                    else:
                        assert len(roots) < d
                        w = res.witness
                        assert 2 <= w.degree <= d
                        assert not (f % w).coeffs
                        assert all(w(a) for a in ctx.elements())

    def test_witness_is_minimal_degree(self):
        f2 = field_by_name("F2")
        # t^2+t+1 times t^3+t+1, both root free
        f = parse_poly("t^2+t+1", f2) * parse_poly("t^3+t+1", f2)
        res = split_completely(f)
        assert not res.splits
        assert res.witness == parse_poly("t^2+t+1", f2)

    def test_splits_with_multiplicity(self):
        f3 = field_by_name("F3")
        f = Poly.from_roots(f3, [f3.one, f3.one, f3.from_int(2)])
        res = split_completely(f)
        assert res.splits
        assert [r.val for r in res.roots] == [1, 1, 2]


class TestSplitRationals:
    def test_integer_roots(self):
        q = field_by_name("Q")
        f = parse_poly("t^3 - 6t^2 + 11t - 6", q)
        res = split_completely(f)
        assert res.splits and [r.val for r in res.roots] == [1, 2, 3]

    def test_fractional_roots(self):
        q = field_by_name("Q")
        f = parse_poly("t^2 - 5/2*t + 3/2", q)  # (t-1)(t-3/2)
        res = split_completely(f)
        assert res.splits
        assert [str(r.val) for r in res.roots] == ["1", "3/2"]

    def test_irrational(self):
        q = field_by_name("Q")
        res = split_completely(parse_poly("t^2 - 2", q))
        assert not res.splits
        assert res.witness == parse_poly("t^2 - 2", q)

    def test_partial_split_leaves_witness(self):
        q = field_by_name("Q")
        f = parse_poly("t^2 - 2", q) * Poly.from_roots(q, [q.from_int(5)])
        res = split_completely(f)
        assert not res.splits
        assert res.witness.degree == 2


class TestSplitFunctionField:
    def test_linear_always(self):
        fx = field_by_name("F3(x)")
        f = parse_poly("t + x", fx)
        res = split_completely(f)
        assert res.splits and res.roots[0] == -fx.x()

    def test_odd_char_square_discriminant(self):
        fx = field_by_name("F3(x)")
        res = split_completely(parse_poly("t^2 - x^2", fx))
        assert res.splits
        assert sorted(fx.format(r) for r in res.roots) == ["2x", "x"]

    def test_odd_char_nonsquare(self):
        fx = field_by_name("F3(x)")
        res = split_completely(parse_poly("t^2 - x", fx))
        assert not res.splits and res.witness.degree == 2

    def test_char2_frobenius_branch(self):
        fx = field_by_name("F2(x)")
        res = split_completely(parse_poly("t^2 + x^2", fx))
        assert res.splits and res.roots == (fx.x(), fx.x())
        assert not split_completely(parse_poly("t^2 + x", fx)).splits

    def test_char2_artin_schreier_branch(self):
        fx = field_by_name("F2(x)")
        res = split_completely(parse_poly("t^2 + t + (x^2+x)", fx))
        assert res.splits
        assert sorted(fx.format(r) for r in res.roots) == ["x", "x+1"]
        assert not split_completely(parse_poly("t^2 + t + x", fx)).splits

    def test_cubic_zero_constant_deflates(self):
        fx = field_by_name("F2(x)")
        res = split_completely(parse_poly("t^3 + (x^2)*t", fx))
        assert res.splits
        assert sorted(fx.format(r) for r in res.roots) == ["0", "x", "x"]
        bad = split_completely(parse_poly("t^3 + x*t", fx))
        assert not bad.splits

    def test_unsupported_shapes(self):
        fx = field_by_name("F2(x)")
        with pytest.raises(UnsupportedDegree):
            split_completely(parse_poly("t^3 + t + x", fx))
        with pytest.raises(UnsupportedDegree):
            split_completely(parse_poly("t^4 + x", fx))


class TestSplitGuards:
    def test_requires_monic(self):
        q = field_by_name("Q")
        with pytest.raises(ValueError):
            split_completely(parse_poly("2t - 1", q))
