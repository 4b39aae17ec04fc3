"""Window semantics and exact arithmetic of truncated Laurent polynomials."""

import random
from fractions import Fraction

import pytest

from loopalg.errors import WindowUnderflowError
from loopalg.laurent import LaurentPoly, OrderBound, TwistedElement, laurent_arith, ramified_pullback, residue


def L(coeffs, lo=None, hi=None):
    if lo is None:
        return LaurentPoly.exact(coeffs)
    return LaurentPoly(coeffs, lo, hi)


def rand_poly(rng, lo=-3, hi=4, exact=True):
    coeffs = {k: Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for k in range(lo, hi)}
    if exact:
        return LaurentPoly.exact(coeffs)
    return LaurentPoly(coeffs, lo, hi)


class TestArithmetic:
    def test_product_example(self):
        f = L({-1: 1, 0: 1})
        g = L({1: 1})
        assert (f * g).coeffs == {0: 1, 1: 1}

    def test_valuation(self):
        assert L({3: 1, 5: -1}).val() == 3
        assert L({}).val() is None

    def test_window_rule_mul(self):
        # windows [-2,2] x [0,3]: the product is determined through
        # min(lo1+hi2, lo2+hi1) = min(1, 2) = 1
        f = L({k: 1 for k in range(-2, 3)}, lo=-2, hi=2)
        g = L({k: 1 for k in range(0, 4)}, lo=0, hi=3)
        assert (f * g).window == (-2, 1)

    def test_window_rule_against_convolution(self):
        rng = random.Random(5)
        for _ in range(50):
            lo1, hi1 = rng.randint(-3, 0), rng.randint(1, 4)
            lo2, hi2 = rng.randint(-2, 0), rng.randint(0, 3)
            f_full = {k: Fraction(rng.randint(-5, 5)) for k in range(lo1, hi1 + 3)}
            g_full = {k: Fraction(rng.randint(-5, 5)) for k in range(lo2, hi2 + 3)}
            f = LaurentPoly({k: v for k, v in f_full.items() if k <= hi1}, lo1, hi1)
            g = LaurentPoly({k: v for k, v in g_full.items() if k <= hi2}, lo2, hi2)
            prod = f * g
            # direct convolution of the untruncated data must agree inside the window
            for k in range(prod.lo, prod.hi + 1):
                direct = sum(
                    f_full.get(i, Fraction(0)) * g_full.get(k - i, Fraction(0))
                    for i in range(lo1, k - lo2 + 1)
                )
                assert prod.coeff(k) == direct, (k, prod.window)

    def test_window_add(self):
        f = L({0: 1}, lo=0, hi=5)
        g = L({1: 1}, lo=0, hi=2)
        assert (f + g).window == (0, 2)

    def test_read_outside_window_raises(self):
        f = L({0: 1}, lo=0, hi=2)
        with pytest.raises(WindowUnderflowError):
            f.coeff(3)

    def test_val_underflow(self):
        f = L({}, lo=0, hi=2)
        with pytest.raises(WindowUnderflowError):
            f.val()

    def test_ring_axioms_random(self):
        rng = random.Random(17)
        for _ in range(40):
            a, b, c = (rand_poly(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c

    def test_laurent_arith_dispatch(self):
        f, g = L({0: 1}), L({1: 2})
        assert laurent_arith(f, g, "add") == f + g
        assert laurent_arith(f, g, "mul") == f * g
        assert laurent_arith(g, L({0: 3}), "scalar") == g.scale(3)
        with pytest.raises(ValueError):
            laurent_arith(f, g, "scalar")  # non-constant scalar operand


class TestResidue:
    def test_examples(self):
        assert residue(L({0: 1})) == 1
        assert residue(L({1: 1})) == 0
        assert residue(L({-2: 3, 0: 5})) == 5

    def test_residue_of_derivative_vanishes(self):
        rng = random.Random(3)
        for _ in range(30):
            f = rand_poly(rng)
            # d f = f'(t) dt = (t f'(t)) dt/t
            assert residue(f.derivative().shift(1)) == 0

    def test_residue_needs_window(self):
        f = L({-1: 1}, lo=-1, hi=-1)
        with pytest.raises(WindowUnderflowError):
            residue(f)


class TestPullback:
    def test_examples(self):
        assert ramified_pullback(L({-1: 1}), 2).coeffs == {-2: 1}
        assert ramified_pullback(L({0: 1, 1: 1}), 3).coeffs == {0: 1, 3: 1}

    def test_is_ring_homomorphism(self):
        rng = random.Random(23)
        for _ in range(25):
            f, g = rand_poly(rng), rand_poly(rng)
            h = rng.choice([2, 3, 5])
            assert ramified_pullback(f * g, h) == ramified_pullback(f, h) * ramified_pullback(g, h)
            assert ramified_pullback(f + g, h) == ramified_pullback(f, h) + ramified_pullback(g, h)

    def test_window_scaling(self):
        f = L({0: 1}, lo=0, hi=2)
        assert ramified_pullback(f, 3).window == (0, 8)

    def test_twisted_pullback_scalar(self):
        # form-degree-1 element picks up the cover degree: dt/t = h du/u
        xi = TwistedElement({0: L({0: Fraction(5)})}, 1, 1)
        back = xi.ramified_pullback(2)
        assert back.component(0).coeff(0) == 10


class TestTwistedElement:
    def test_form_degree_in_equality(self):
        a = TwistedElement({0: L({0: 1})}, 2, 1)
        b = TwistedElement({0: L({0: 1})}, 2, 2)
        assert a != b
        assert a == TwistedElement({0: L({0: 1})}, 2, 1)

    def test_addition_requires_matching_degree(self):
        a = TwistedElement({0: L({0: 1})}, 2, 1)
        b = TwistedElement({0: L({0: 1})}, 2, 2)
        with pytest.raises(ValueError):
            a + b


class TestOrderBound:
    def test_meet_join_compare(self):
        a, b = OrderBound([1, 3]), OrderBound([2, 2])
        assert a.meet(b) == OrderBound([1, 2])
        assert a.join(b) == OrderBound([2, 3])
        assert OrderBound([1, 2]) <= OrderBound([1, 3])
        assert not (a <= b)


class TestSerialization:
    def test_text_and_pairs(self):
        f = L({-1: Fraction(1, 2), 2: -3})
        assert f.to_text() == "1/2*t^-1 + -3*t^2"
        assert LaurentPoly.from_pairs(f.to_pairs()) == f
