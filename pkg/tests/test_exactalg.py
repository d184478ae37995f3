"""Exact-arithmetic foundation: field axioms, polynomial structure, places,
valuations, and the squareness tests that drive the two-descent argument."""

import random
from fractions import Fraction

import pytest

from k3mahler import fixtures as fx
from k3mahler.exactalg import (ONE, Place, Poly, QuadElem, RatFunc, SQRT_M3,
                               is_square_quad, is_square_ratfunc,
                               odd_multiplicity_part, poly_gcd, quad_arith,
                               sqrt_ratfunc, squarefree_part, valuation,
                               yun_decomposition)


def rand_quad(rng, span=9):
    return QuadElem(Fraction(rng.randint(-span, span), rng.randint(1, 4)),
                    Fraction(rng.randint(-span, span), rng.randint(1, 4)))


def rand_poly(rng, deg, span=6):
    while True:
        p = Poly([rand_quad(rng, span) for _ in range(deg + 1)])
        if not p.is_zero():
            return p


class TestQuadElem:
    def test_norm_example(self):
        assert quad_arith("norm", QuadElem(1, 1)) == 4

    def test_conj_involution(self):
        rng = random.Random(1)
        for _ in range(50):
            x = rand_quad(rng)
            assert quad_arith("conj", quad_arith("conj", x)) == x

    def test_inv_rational_embedding(self):
        assert quad_arith("inv", QuadElem(2)) == QuadElem(Fraction(1, 2))

    def test_inv_zero_raises(self):
        with pytest.raises(ZeroDivisionError):
            quad_arith("inv", QuadElem(0))

    def test_field_axioms_randomized(self):
        rng = random.Random(7)
        for _ in range(200):
            x, y, z = (rand_quad(rng) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x + y == y + x and x * y == y * x
            if not x.is_zero():
                assert x * x.inv() == ONE
            assert x * x.conj() == QuadElem(x.norm())

    def test_norm_positive_definite(self):
        rng = random.Random(3)
        for _ in range(100):
            x = rand_quad(rng)
            assert x.norm() >= 0
            assert (x.norm() == 0) == x.is_zero()


class TestSquarenessInField:
    def test_examples(self):
        ok, w = is_square_quad(QuadElem(Fraction(-1, 3)))
        assert ok and w * w == QuadElem(Fraction(-1, 3))
        assert w in (SQRT_M3 * Fraction(1, 3), -SQRT_M3 * Fraction(1, 3))
        ok, w = is_square_quad(QuadElem(-3))
        assert ok and w * w == QuadElem(-3)
        assert not is_square_quad(QuadElem(2))[0]

    def test_random_squares_have_witnesses(self):
        rng = random.Random(11)
        for _ in range(100):
            x = rand_quad(rng)
            ok, w = is_square_quad(x * x)
            assert ok and w * w == x * x


class TestPoly:
    def test_divmod_roundtrip(self):
        rng = random.Random(5)
        for _ in range(40):
            f = rand_poly(rng, rng.randint(0, 6))
            g = rand_poly(rng, rng.randint(0, 4))
            q, r = divmod(f, g)
            assert q * g + r == f
            assert r.is_zero() or r.degree() < g.degree()

    def test_gcd_common_factor(self):
        rng = random.Random(6)
        for _ in range(25):
            h = rand_poly(rng, rng.randint(1, 3))
            f = rand_poly(rng, rng.randint(0, 3)) * h
            g = rand_poly(rng, rng.randint(0, 3)) * h
            d = poly_gcd(f, g)
            assert (d % h.monic()).is_zero() or (h.monic() % d).is_zero()
            assert (f % d).is_zero() and (g % d).is_zero()

    def test_gcd_of_reversed_section_coordinates(self):
        # regression: coprime degree-15 pairs with algebraic-integer content
        # blew up the naive remainder sequence; must stay cheap and return 1
        y = fx.infinite_section_k18().y
        m = max(y.num.degree(), y.den.degree())
        assert poly_gcd(y.num.reverse(m), y.den.reverse(m)) == Poly([1])

    def test_gcd_with_multiplicities(self):
        rng = random.Random(41)
        for _ in range(10):
            h = rand_poly(rng, 2).monic()
            f = h ** 3 * rand_poly(rng, 1)
            g = h ** 2 * rand_poly(rng, 2)
            d = poly_gcd(f, g)
            assert (d % h ** 2).is_zero() or poly_gcd(d, h ** 2) == h ** 2

    def test_squarefree_part_examples(self):
        lin9 = Poly([-9, 1])
        assert squarefree_part(lin9 ** 2) == lin9
        quad = Poly([72, -21, 1])
        assert squarefree_part(quad) == quad
        mixed = lin9 ** 2 * Poly([3, 1])
        assert squarefree_part(mixed) == lin9 * Poly([3, 1])

    def test_squarefree_zero_raises(self):
        with pytest.raises(ValueError):
            squarefree_part(Poly())

    def test_yun_reconstructs(self):
        rng = random.Random(9)
        for _ in range(20):
            f = rand_poly(rng, 2).monic() * rand_poly(rng, 1).monic() ** 2
            parts = yun_decomposition(f)
            rebuilt = Poly([1])
            for a, i in parts:
                rebuilt = rebuilt * a ** i
            assert rebuilt == f.monic()

    def test_odd_multiplicity_part(self):
        a, b = Poly([1, 1]), Poly([2, 0, 1])
        assert odd_multiplicity_part(a ** 2 * b) == b.monic()
        assert odd_multiplicity_part(a ** 2 * b ** 4).is_constant()


class TestRatFunc:
    def test_canonical_reconstruction(self):
        rng = random.Random(13)
        for _ in range(30):
            f = RatFunc(rand_poly(rng, rng.randint(0, 4)),
                        rand_poly(rng, rng.randint(0, 4)))
            h = rand_poly(rng, rng.randint(1, 3))
            again = RatFunc(f.num * h, f.den * h)
            assert again.num == f.num and again.den == f.den

    def test_field_identities(self):
        rng = random.Random(17)
        for _ in range(20):
            f = RatFunc(rand_poly(rng, 2), rand_poly(rng, 2))
            g = RatFunc(rand_poly(rng, 2), rand_poly(rng, 2))
            assert f + g - g == f
            if not g.is_zero():
                assert (f / g) * g == f


class TestPlacesAndValuation:
    def test_reducible_quadratic_rejected(self):
        # sigma^2 + 3 = (sigma - sqrt(-3))(sigma + sqrt(-3)) over the field
        with pytest.raises(ValueError):
            Place.finite(Poly([3, 0, 1]))
        Place.finite(Poly([72, -21, 1]))  # disc 153 is not a square

    def test_high_degree_needs_flag(self):
        cubic = Poly([1, 0, 0, 1])
        with pytest.raises(ValueError):
            Place.finite(cubic)
        v = Place.finite(cubic, assume_irreducible=True)
        assert not v.irreducibility_checked

    def test_printed_section_valuations(self):
        x = fx.infinite_section_k18().x
        assert valuation(x, Place.at_root(9)) == -2
        assert valuation(x, Place.infinity()) == 4
        assert valuation(RatFunc(1), Place.at_root(9)) == 0
        assert valuation(RatFunc(1), Place.infinity()) == 0

    def test_valuation_zero_raises(self):
        with pytest.raises(ValueError):
            valuation(RatFunc(0), Place.infinity())

    def test_valuation_additive(self):
        rng = random.Random(19)
        places = [Place.at_root(0), Place.at_root(9), Place.at_root(-2),
                  Place.finite(Poly([72, -21, 1])), Place.infinity()]
        for _ in range(20):
            f = RatFunc(rand_poly(rng, 3), rand_poly(rng, 2))
            g = RatFunc(rand_poly(rng, 2), rand_poly(rng, 3))
            for v in places:
                assert valuation(f * g, v) == valuation(f, v) + valuation(g, v)

    def test_degree_formula(self):
        # sum over all places of val * deg vanishes; built from known factors
        rng = random.Random(23)
        factors = [Poly([0, 1]), Poly([-9, 1]), Poly([72, -21, 1]),
                   Poly([18, -15, 1])]
        for _ in range(20):
            exps = [rng.randint(-3, 3) for _ in factors]
            num, den = Poly([rng.randint(1, 5)]), Poly([1])
            for p, e in zip(factors, exps):
                if e > 0:
                    num = num * p ** e
                elif e < 0:
                    den = den * p ** (-e)
            f = RatFunc(num, den)
            total = sum(e * p.degree() for p, e in zip(factors, exps))
            assert valuation(f, Place.infinity()) * 1 + total == 0


class TestSquarenessInFunctionField:
    def test_paper_cases(self, k18):
        hd = k18["halving"]
        assert is_square_ratfunc(hd["xprime"])
        assert not is_square_ratfunc(k18["ps"].x)
        assert not is_square_ratfunc(hd["qplus"])
        assert not is_square_ratfunc(hd["qminus"])

    def test_square_and_twisted_square(self):
        rng = random.Random(29)
        sigma = RatFunc(Poly.x())
        for _ in range(20):
            f = RatFunc(rand_poly(rng, 2), rand_poly(rng, 2))
            assert is_square_ratfunc(f * f)
            assert not is_square_ratfunc(sigma * f * f)
            w = sqrt_ratfunc(f * f)
            assert w is not None and w * w == f * f

    def test_constant_class_matters(self):
        f = RatFunc(Poly([0, 0, 1]))  # sigma^2
        assert is_square_ratfunc(f)
        assert is_square_ratfunc(f * QuadElem(-3))   # -3 is a square in the field
        assert not is_square_ratfunc(f * QuadElem(2))
