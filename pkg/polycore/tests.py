from fractions import Fraction

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from .models import HermitianPoly, Monomial, TorusPoly
from .operations import (
    diagonal_restriction, hpoly_dbar_d, laplace_beltrami, poly_add, poly_eval, poly_mul,
    poly_star, series_quotient,
)
from .serializers import TorusPolySerializer


def random_poly(rng, dimension, terms=5, max_exponent=3, integer=False):
    items = []
    for _ in range(terms):
        exponents = [int(e) for e in rng.integers(0, max_exponent + 1, size=dimension)]
        if integer:
            coefficient = int(rng.integers(-5, 6))
        else:
            coefficient = complex(rng.normal(), rng.normal())
        items.append((exponents, coefficient))
    return TorusPoly(dimension, items)


def random_polydisk_points(rng, dimension, count):
    radius = np.sqrt(rng.uniform(0, 1, size=(count, dimension)))
    angle = rng.uniform(0, 2 * np.pi, size=(count, dimension))
    return radius * np.exp(1j * angle)


class MonomialTest(SimpleTestCase):
    def test_degree_and_dimension(self):
        monomial = Monomial((2, 0, 1))
        self.assertEqual(monomial.dimension, 3)
        self.assertEqual(monomial.degree, 3)

    def test_negative_exponent_rejected(self):
        with self.assertRaises(ValidationError):
            Monomial((1, -1))

    def test_empty_monomial_rejected(self):
        with self.assertRaises(ValidationError):
            Monomial(())


class TorusPolyArithmeticTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.z1 = TorusPoly.variable(2, 0)
        self.z2 = TorusPoly.variable(2, 1)

    def test_additive_inverse_is_zero(self):
        self.assertTrue(poly_add(self.z1, -self.z1).is_zero())

    def test_disjoint_supports(self):
        total = poly_add(1 + self.z1, self.z2)
        expected = TorusPoly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
        self.assertEqual(total, expected)

    def test_adding_zero_is_identity(self):
        p = random_poly(self.rng, 2)
        self.assertEqual(poly_add(p, TorusPoly.zero(2)), p)

    def test_products(self):
        self.assertEqual(poly_mul(self.z1, self.z2), TorusPoly.monomial(2, (1, 1)))
        self.assertEqual(poly_mul(1 + self.z1, 1 - self.z1), TorusPoly(2, {(0, 0): 1, (2, 0): -1}))
        p = random_poly(self.rng, 2)
        self.assertEqual(poly_mul(p, TorusPoly.constant(2, 1)), p)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValidationError):
            poly_add(self.z1, TorusPoly.variable(3, 0))
        with self.assertRaises(ValidationError):
            poly_mul(self.z1, TorusPoly.variable(1, 0))
        with self.assertRaises(ValidationError):
            poly_eval(self.z1, [0.5])

    def test_canonical_form_drops_exact_zeros_only(self):
        p = TorusPoly(1, {(0,): 0, (1,): 1e-300})
        self.assertEqual(len(p), 1)
        self.assertEqual(list(p.terms), [Monomial((1,))])

    def test_terms_in_lexicographic_order(self):
        p = TorusPoly(2, {(1, 0): 1, (0, 2): 1, (0, 1): 1})
        self.assertEqual([tuple(m) for m in p.terms], [(0, 1), (0, 2), (1, 0)])

    def test_ring_axioms_exact_for_integers(self):
        for _ in range(5):
            p, q, s = (random_poly(self.rng, 3, integer=True) for _ in range(3))
            self.assertEqual((p * q) * s, p * (q * s))
            self.assertEqual(p * (q + s), p * q + p * s)
            self.assertEqual(p * q, q * p)

    def test_ring_axioms_for_floats(self):
        p, q, s = (random_poly(self.rng, 2) for _ in range(3))
        self.assertLess(((p * q) * s).distance(p * (q * s)), 1e-12 * 100)
        self.assertLess((p * (q + s)).distance(p * q + p * s), 1e-12 * 100)

    def test_exact_fractions_stay_exact(self):
        p = TorusPoly(1, {(1,): Fraction(1, 3)})
        q = p * p - TorusPoly(1, {(2,): Fraction(1, 9)})
        self.assertTrue(q.is_zero())


class TorusPolyEvaluationTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_simple_values(self):
        self.assertAlmostEqual(poly_eval(TorusPoly.monomial(2, (1, 1)), [1j, 1j]), -1)
        self.assertEqual(poly_eval(TorusPoly.constant(3, 7), [0.1, 0.2, 0.3]), 7)

    def test_zero_power_at_origin_is_one(self):
        p = TorusPoly(2, {(0, 0): 2, (0, 3): 1})
        self.assertEqual(poly_eval(p, [0, 0]), 2)

    def test_batch_evaluation_matches_pointwise(self):
        p = random_poly(self.rng, 3)
        points = random_polydisk_points(self.rng, 3, 12).reshape(3, 4, 3)
        values = poly_eval(p, points)
        self.assertEqual(values.shape, (3, 4))
        self.assertAlmostEqual(values[1, 2], poly_eval(p, points[1, 2]), places=12)

    def test_evaluation_is_multiplicative(self):
        for _ in range(10):
            p, q = random_poly(self.rng, 2), random_poly(self.rng, 2)
            z = random_polydisk_points(self.rng, 2, 1)[0]
            product = poly_eval(poly_mul(p, q), z)
            expected = poly_eval(p, z) * poly_eval(q, z)
            self.assertLessEqual(abs(product - expected), 1e-12 * max(1.0, abs(expected)) * 10)


class StarTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_star_of_one(self):
        self.assertEqual(poly_star(TorusPoly.constant(2, 1), (2, 1)), TorusPoly.monomial(2, (2, 1)))

    def test_star_is_an_involution(self):
        p = random_poly(self.rng, 3)
        bound = p.multidegree
        self.assertEqual(poly_star(poly_star(p, bound), bound), p)

    def test_star_conjugates_coefficients(self):
        p = TorusPoly(1, {(0,): 1 + 2j, (1,): 3j})
        self.assertEqual(poly_star(p, (1,)), TorusPoly(1, {(0,): -3j, (1,): 1 - 2j}))

    def test_multidegree_too_small(self):
        with self.assertRaises(ValidationError):
            poly_star(TorusPoly.monomial(2, (2, 0)), (1, 1))

    def test_modulus_preserved_on_torus(self):
        p = random_poly(self.rng, 2)
        star = poly_star(p, p.multidegree)
        angles = self.rng.uniform(0, 2 * np.pi, size=(50, 2))
        points = np.exp(1j * angles)
        np.testing.assert_allclose(np.abs(poly_eval(star, points)), np.abs(poly_eval(p, points)), rtol=1e-12, atol=1e-12)


class SeriesTest(SimpleTestCase):
    def test_geometric_series(self):
        one = TorusPoly.constant(1, 1)
        quotient = series_quotient(one, one - TorusPoly.variable(1, 0), 5)
        self.assertEqual(quotient, TorusPoly(1, {(k,): 1.0 for k in range(6)}))

    def test_integer_denominator_stays_exact(self):
        quotient = series_quotient(TorusPoly.constant(1, 1), TorusPoly(1, {(0,): 2, (1,): 1}), 3)
        expected = [Fraction(1, 2), Fraction(-1, 4), Fraction(1, 8), Fraction(-1, 16)]
        self.assertEqual([quotient.coefficient((k,)) for k in range(4)], expected)
        self.assertTrue(all(isinstance(c, Fraction) for c in quotient.terms.values()))

    def test_diagonal_restriction(self):
        h = TorusPoly(2, {(1, 0): 0.25, (0, 1): 0.25})
        self.assertEqual(diagonal_restriction(h), [0, 0.5])


class HermitianPolyTest(SimpleTestCase):
    def test_mixed_derivative(self):
        z, zbar = HermitianPoly.z(), HermitianPoly.zbar()
        self.assertEqual(hpoly_dbar_d(z * zbar), HermitianPoly.constant(1))
        self.assertTrue(hpoly_dbar_d(z * z).is_zero())

    def test_laplace_beltrami_of_norm(self):
        # -(1 - z zbar) * 1
        self.assertEqual(laplace_beltrami(HermitianPoly.z() * HermitianPoly.zbar()), -HermitianPoly.one_minus_norm())

    def test_text_form(self):
        self.assertEqual(str(HermitianPoly.one_minus_norm()), '1 - z*zbar')
        self.assertEqual(str(HermitianPoly({(2, 1): 3, (0, 1): -1})), '-zbar + 3*z^2*zbar')

    def test_evaluation_uses_conjugate(self):
        p = HermitianPoly({(1, 1): 1})
        self.assertAlmostEqual(p.evaluate(0.6 + 0.8j), 1.0)
        self.assertEqual(HermitianPoly.constant(1).evaluate(0), 1)

    def test_rejects_non_integer_coefficients(self):
        with self.assertRaises(ValidationError):
            HermitianPoly({(0, 0): 0.5})


class TorusPolySerializerTest(SimpleTestCase):
    def test_json_form_is_canonical(self):
        p = TorusPoly(2, {(1, 0): 2j, (0, 1): 1})
        data = TorusPolySerializer(p).data
        self.assertEqual(data['dim'], 2)
        self.assertEqual([term['e'] for term in data['terms']], [[0, 1], [1, 0]])
        self.assertEqual(data['terms'][1]['im'], 2.0)

    def test_parse(self):
        serializer = TorusPolySerializer(data={'dim': 1, 'terms': [{'e': [2], 're': 1.5, 'im': -1}]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), TorusPoly(1, {(2,): 1.5 - 1j}))

    def test_wrong_exponent_length(self):
        serializer = TorusPolySerializer(data={'dim': 2, 'terms': [{'e': [2], 're': 1.0}]})
        self.assertFalse(serializer.is_valid())
