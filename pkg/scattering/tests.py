import itertools
from io import StringIO

from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from polycore.models import HermitianPoly

from .models import MultiIndex, ScatteringIndex
from .operations import (
    binomial, eigen_table, enumerate_indices, phi, phi_by_derivative, phi_eval, verify_eigen, weight,
)


class BinomialTest(SimpleTestCase):
    def test_values(self):
        self.assertEqual(binomial(0, 0), 1)
        self.assertEqual(binomial(5, 2), 10)
        self.assertEqual(binomial(30, 15), 155117520)
        self.assertEqual(binomial(3, 4), 0)


class ModelTest(SimpleTestCase):
    def test_negative_index(self):
        with self.assertRaises(ValidationError):
            ScatteringIndex(-1, 2)

    def test_multi_index_trims_trailing_zeros(self):
        alpha = MultiIndex((1, 2, 0, 0))
        self.assertEqual(alpha, MultiIndex((1, 2)))
        self.assertEqual(alpha.length, 2)
        self.assertEqual(alpha[3], 0)
        self.assertTrue(alpha.in_level(2))
        self.assertFalse(alpha.in_level(1))

    def test_contiguity(self):
        self.assertTrue(MultiIndex((1, 3)).is_contiguous())
        self.assertFalse(MultiIndex((1, 0, 2)).is_contiguous())


class PhiTest(SimpleTestCase):
    def test_small_cases(self):
        z, zbar = HermitianPoly.z(), HermitianPoly.zbar()
        self.assertEqual(phi(1, 1), HermitianPoly.one_minus_norm())
        self.assertEqual(phi(3, 0), z ** 3)
        self.assertTrue(phi(0, 2).is_zero())
        self.assertEqual(phi(0, 0), 1)
        self.assertEqual(phi(1, 2), -zbar * HermitianPoly.one_minus_norm())

    def test_negative_index_rejected(self):
        with self.assertRaises(ValidationError):
            phi(-1, 0)

    def test_derivative_formula_agrees(self):
        for p, q in itertools.product(range(0, 7), range(1, 7)):
            with self.subTest(p=p, q=q):
                self.assertEqual(phi_by_derivative(p, q), phi(p, q))

    def test_integer_coefficients(self):
        for p, q in itertools.product(range(6), repeat=2):
            self.assertTrue(all(isinstance(c, int) for _, c in phi(p, q).items()))

    def test_evaluation(self):
        self.assertEqual(phi_eval(1, 1, 0), 1)
        self.assertEqual(phi_eval(1, 3, 0), 0)
        self.assertAlmostEqual(phi_eval(2, 0, 0.5j), -0.25)


class EigenTest(SimpleTestCase):
    def test_identity_on_range(self):
        for p, q in itertools.product(range(13), repeat=2):
            with self.subTest(p=p, q=q):
                self.assertTrue(verify_eigen(p, q))

    def test_table_shape(self):
        rows = eigen_table(2, 3)
        self.assertEqual(len(rows), 12)
        self.assertEqual(rows[0], (0, 0, True))


class WeightTest(SimpleTestCase):
    def test_zero_index_gives_r0(self):
        self.assertEqual(weight(MultiIndex.zero(), [0.3j]), 0.3j)

    def test_first_level(self):
        self.assertAlmostEqual(weight(MultiIndex((1,)), [0, 0.4 - 0.1j]), 0.4 - 0.1j)

    def test_second_level_matches_series_expansion(self):
        r1, r2 = 0.3 + 0.2j, -0.5j
        expected = -r1.conjugate() * (1 - abs(r1) ** 2) * r2 ** 2
        self.assertAlmostEqual(weight(MultiIndex((1, 2)), [0, r1, r2]), expected)

    def test_gap_in_support_gives_zero(self):
        self.assertEqual(weight(MultiIndex((1, 0, 2)), [0, 0.3, 0.2, 0.1]), 0)

    def test_standard_data_needs_leading_one(self):
        self.assertEqual(weight(MultiIndex((2, 1)), [0, 0.5, 0.5]), 0)

    def test_insufficient_parameters(self):
        with self.assertRaises(ValidationError):
            weight(MultiIndex((1, 1)), [0, 0.2])


class EnumerateTest(SimpleTestCase):
    def test_level_zero(self):
        self.assertEqual(enumerate_indices(0, 5), [MultiIndex.zero()])

    def test_small_level(self):
        self.assertEqual(enumerate_indices(2, 2), [MultiIndex(()), MultiIndex((1,)), MultiIndex((1, 1))])

    def test_count_matches_brute_force(self):
        n, degree = 4, 4

        def admissible(vector):
            if not any(vector):
                return True
            top = max(j for j, v in enumerate(vector) if v)
            return vector[0] == 1 and all(vector[: top + 1])

        brute = [
            v for v in itertools.product(range(degree + 1), repeat=n)
            if sum(v) <= degree and admissible(v)
        ]
        self.assertEqual(len(enumerate_indices(n, degree)), len(brute))


class ScatterCommandTest(SimpleTestCase):
    def test_phi(self):
        out = StringIO()
        call_command('scatter', 'phi', '1', '1', stdout=out)
        self.assertEqual(out.getvalue().strip(), '1 - z*zbar')

    def test_verify(self):
        out = StringIO()
        call_command('scatter', 'verify', '--pmax', '3', '--qmax', '3', stdout=out)
        self.assertIn('All 16 scattering polynomials pass.', out.getvalue())

    def test_negative_index(self):
        with self.assertRaises(CommandError):
            call_command('scatter', 'phi', '-1', '0', stdout=StringIO())
