from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import polynomials, rationals
from oracles import count_roots_half_open, nonneg_on
from stochdom.errors import ZeroPolynomial
from stochdom.exactalg import (
    Polynomial,
    RealInterval,
    as_rational,
    cauchy_bound,
    count_real_roots,
    format_rational,
    is_nonnegative_on,
    parse_rational,
    poly_derivative,
    poly_eval,
    poly_gcd,
    squarefree_part,
    sturm_chain,
)

X = Polynomial.x()
G = X**3 - 24 * X**2 + 192 * X - 320
H = 3 * X**2 - 48 * X + 192


def iv(lo, hi):
    return RealInterval(None if lo is None else Fraction(lo), None if hi is None else Fraction(hi))


class TestRationals:
    @pytest.mark.parametrize(
        "text, value",
        [("3", Fraction(3)), ("-2/6", Fraction(-1, 3)), ("−7/2", Fraction(-7, 2)), ("0/5", Fraction(0)), (" 9/4\n", Fraction(9, 4))],
    )
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["1.5", "1/0", "", "a/b", "1e3", "1 / 2", "+3", "2/-3"])
    def test_parse_rejects(self, text):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational(text)

    def test_format(self):
        assert format_rational(Fraction(341, 72900)) == "341/72900"
        assert format_rational(Fraction(-4, 2)) == "-2"
        assert format_rational(Fraction(0)) == "0"

    def test_zero_is_canonical(self):
        z = as_rational("0/7")
        assert (z.numerator, z.denominator) == (0, 1)

    @pytest.mark.parametrize("bad", [0.5, True, None])
    def test_rejects_non_exact(self, bad):
        with pytest.raises((TypeError, ValueError)):
            as_rational(bad)

    @given(rationals(-50, 50, 97))
    def test_format_parse_round_trip(self, q):
        assert parse_rational(format_rational(q)) == q


class TestPolynomialBasics:
    def test_eval_examples(self):
        assert poly_eval(G, 4) == 128
        assert poly_eval(Polynomial(), Fraction(7, 3)) == 0
        assert poly_eval(X**2 - 2, 1) == -1

    def test_derivative_examples(self):
        assert poly_derivative(G, 1) == H
        assert poly_derivative(Polynomial.constant(5), 1).is_zero
        assert poly_derivative(X**4, 4) == Polynomial.constant(24)

    def test_derivative_order_must_be_positive(self):
        with pytest.raises(ValueError):
            poly_derivative(G, 0)

    def test_zero_polynomial(self):
        z = Polynomial((0, 0, 0))
        assert z.coeffs == () and z.degree == -1 and z.is_zero

    def test_str(self):
        assert str(G) == "x^3 - 24*x^2 + 192*x - 320"
        assert str(Polynomial((Fraction(-1, 2),))) == "-1/2"

    def test_linear_power(self):
        assert Polynomial.linear_power(2, 3, -1) == -((X - 2) ** 3)

    def test_division_identity(self):
        q, r = divmod(G, X - 4)
        assert q * (X - 4) + r == G and r == Polynomial.constant(128)

    def test_gcd_and_squarefree(self):
        p = (X - 1) ** 3 * (X + 2)
        assert poly_gcd(p, p.derivative()) == (X - 1) ** 2
        assert squarefree_part(p) == (X - 1) * (X + 2)

    @given(polynomials(), polynomials())
    def test_canonical_form_closure(self, p, q):
        for r in (p + q, p - q, p * q, p.derivative(), p.compose_affine(Fraction(1, 3), 2)):
            assert not r.coeffs or r.coeffs[-1] != 0
            assert all(isinstance(c, Fraction) for c in r.coeffs)
            assert r.degree == len(r.coeffs) - 1

    @given(polynomials(), polynomials(), rationals())
    def test_ring_operations_evaluate_pointwise(self, p, q, x):
        assert (p + q)(x) == p(x) + q(x)
        assert (p * q)(x) == p(x) * q(x)

    @given(polynomials(), polynomials(max_degree=3).filter(lambda q: not q.is_zero))
    def test_divmod_identity(self, p, q):
        quo, rem = divmod(p, q)
        assert quo * q + rem == p
        assert rem.degree < q.degree

    @given(polynomials(), rationals(-3, 3, 16))
    def test_derivative_matches_finite_difference(self, p, x):
        h = Fraction(1, 10**6)
        slope = (p(x + h) - p(x)) / h
        # Taylor remainder of a degree <= 6 polynomial with small coefficients
        assert abs(slope - p.derivative()(x)) <= h * 10**6

    @given(polynomials(), rationals(), rationals(-2, 2).filter(bool), rationals())
    def test_compose_affine(self, p, shift, scale, s):
        assert p.compose_affine(shift, scale)(s) == p(shift + scale * s)


class TestRootCounting:
    def test_examples(self):
        assert count_real_roots(X**2 - 2, iv(0, 2)) == 1
        assert count_real_roots((X - 1) ** 2, iv(0, 3)) == 1
        assert count_real_roots(H, iv(None, None)) == 1

    def test_half_open_convention(self):
        p = (X - 1) * (X - 2)
        assert count_real_roots(p, iv(1, 2)) == 1
        assert count_real_roots(p, iv(Fraction(1, 2), 2)) == 2
        assert count_real_roots(p, iv(2, 3)) == 0

    def test_zero_polynomial_raises(self):
        with pytest.raises(ZeroPolynomial):
            count_real_roots(Polynomial(), iv(0, 1))

    def test_constants_have_no_roots(self):
        assert count_real_roots(Polynomial.constant(3)) == 0

    def test_cauchy_bound_encloses_roots(self):
        p = Polynomial.from_roots([-7, 3, Fraction(11, 2)], lead=Fraction(1, 5))
        bound = cauchy_bound(p)
        assert bound > 7
        assert count_real_roots(p, iv(-bound, bound)) == 3

    def test_sturm_chain_ends_in_constant(self):
        chain = sturm_chain(G)
        assert chain[-1].degree == 0

    @given(
        st.lists(rationals(-5, 5, 6), min_size=1, max_size=6),
        st.lists(st.integers(1, 3), min_size=6, max_size=6),
        rationals(-6, 6, 5),
        rationals(-6, 6, 5),
        rationals(-3, 3, 4).filter(bool),
    )
    def test_planted_roots(self, roots, mults, a, b, lead):
        lo, hi = min(a, b), max(a, b)
        p = Polynomial.constant(lead)
        for r, k in zip(roots, mults):
            p = p * (X - r) ** k
        expected = len({r for r in roots if lo < r <= hi})
        assert count_real_roots(p, iv(lo, hi)) == expected
        assert count_real_roots(p) == len(set(roots))

    @given(polynomials().filter(lambda p: not p.is_zero), rationals(), rationals())
    def test_matches_sympy(self, p, a, b):
        lo, hi = min(a, b), max(a, b)
        assert count_real_roots(p, iv(lo, hi)) == count_roots_half_open(p.coeffs, lo, hi)
        assert count_real_roots(p) == count_roots_half_open(p.coeffs, None, None)


class TestNonnegativity:
    def test_examples(self):
        assert is_nonnegative_on(H, iv(None, None))
        assert is_nonnegative_on(G, iv(4, None))
        res = is_nonnegative_on(X**2 - 2, iv(0, 2))
        assert not res and res.witness in iv(0, 2) and (X**2 - 2)(res.witness) < 0

    def test_tails(self):
        assert not is_nonnegative_on(G, iv(None, None))
        res = is_nonnegative_on(-X + 5, iv(0, None))
        assert not res and (-X + 5)(res.witness) < 0 and res.witness >= 0
        res = is_nonnegative_on(X**3, iv(None, 0))
        assert not res and res.witness < 0

    def test_touching_zero_is_nonnegative(self):
        p = (X - Fraction(1, 3)) ** 2 * (X - 5) ** 4
        assert is_nonnegative_on(p)
        assert is_nonnegative_on(-p, iv(Fraction(1, 3), Fraction(1, 3)))

    def test_narrow_dip_found(self):
        p = (X - Fraction(2, 7)) ** 2 - Fraction(1, 10**12)
        res = is_nonnegative_on(p, iv(0, 1))
        assert not res and p(res.witness) < 0

    def test_degenerate_interval(self):
        assert is_nonnegative_on(X - 1, iv(1, 1))
        assert not is_nonnegative_on(X - 1, iv(0, 0))

    def test_constants(self):
        assert is_nonnegative_on(Polynomial())
        assert not is_nonnegative_on(Polynomial.constant(-1), iv(0, 1))

    @given(polynomials(), rationals(), rationals())
    def test_matches_sympy_decision(self, p, a, b):
        lo, hi = min(a, b), max(a, b)
        res = is_nonnegative_on(p, iv(lo, hi))
        assert bool(res) == nonneg_on(p.coeffs, lo, hi)
        if not res:
            assert lo <= res.witness <= hi and p(res.witness) < 0

    @given(polynomials(), st.one_of(st.none(), rationals()), st.booleans())
    def test_matches_sympy_on_half_lines(self, p, end, left):
        lo, hi = (None, end) if left else (end, None)
        res = is_nonnegative_on(p, iv(lo, hi))
        assert bool(res) == nonneg_on(p.coeffs, lo, hi)
        if not res:
            assert res.witness in iv(lo, hi) and p(res.witness) < 0

    def test_seeded_tricky_shapes(self):
        from oracles import random_test_polynomial

        rng = random.Random(20261016)
        for _ in range(300):
            p = Polynomial(tuple(random_test_polynomial(rng)))
            lo = Fraction(rng.randint(-40, 0), 10)
            hi = lo + Fraction(rng.randint(0, 60), 10)
            res = is_nonnegative_on(p, iv(lo, hi))
            assert bool(res) == nonneg_on(p.coeffs, lo, hi), str(p)
            if not res:
                assert lo <= res.witness <= hi and p(res.witness) < 0
