import json
import os
import tempfile
from fractions import Fraction
from io import StringIO

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from polycore.models import TorusPoly
from polycore.operations import diagonal_restriction
from torus_schur.exceptions import SchurParameterError

from .models import MonomialSubstitution, SchurData
from .operations import (
    apply_substitution, build_quads, determinant_residual, downward_residual, eval_b, eval_convergent,
    eval_direct, eval_g, eval_recombined, eval_tail, real_part_residual, schur_algorithm_1d,
    sign_flip_residual, star_residuals, substitute, substituted_level, tail_identity_residual,
    taylor_from_rational, taylor_from_weights, transmission_residual, univariate_rational,
    upward_residual, zero_free_margin,
)
from .serializers import SchurModelSerializer

TWO_VARIABLE = SchurData(2, [0, 0.3, -0.4j, 0.2 + 0.2j, -0.35], [1, 2, 2, 1])
EXACT = SchurData(2, [0, Fraction(1, 3), Fraction(-1, 2), Fraction(1, 4)], [1, 2, 1])


def torus_points(rng, dimension, count):
    return np.exp(1j * rng.uniform(0, 2 * np.pi, size=(count, dimension)))


def polydisk_points(rng, dimension, count):
    radius = np.sqrt(rng.uniform(0, 1, size=(count, dimension)))
    return radius * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(count, dimension)))


class SchurDataTest(SimpleTestCase):
    def test_requires_standard_function(self):
        with self.assertRaises(ValidationError) as caught:
            SchurData(1, [0.1, 0.2], [1])
        self.assertIn('r', caught.exception.message_dict)

    def test_parameters_inside_disk(self):
        with self.assertRaises(ValidationError):
            SchurData(1, [0, 1.0], [1])

    def test_allocation_length_and_range(self):
        with self.assertRaises(ValidationError):
            SchurData(2, [0, 0.2], [])
        with self.assertRaises(ValidationError):
            SchurData(2, [0, 0.2], [3])

    def test_helpers(self):
        self.assertEqual(TWO_VARIABLE.m, 4)
        self.assertEqual(TWO_VARIABLE.multidegree(3), (1, 2))
        self.assertEqual(EXACT.level_product(2), Fraction(8, 9) * Fraction(3, 4))
        self.assertEqual(TWO_VARIABLE.tail(2).r, (0, 0.2 + 0.2j, -0.35))

    def test_substitution_rejects_zero_row(self):
        with self.assertRaises(ValidationError):
            MonomialSubstitution(((1, 0), (0, 0)), 2)


class QuadTest(SimpleTestCase):
    def test_level_zero(self):
        quads = build_quads(SchurData(3, [0], []))
        self.assertEqual(len(quads), 1)
        one = TorusPoly.constant(3, 1)
        self.assertEqual((quads[0].psi, quads[0].psi_star, quads[0].phi, quads[0].phi_star), (one,) * 4)

    def test_first_level_matches_matrix_product(self):
        a, z = 0.3 - 0.2j, 0.7j
        data = SchurData(1, [0, a], [1])
        quad = build_quads(data)[1]
        product = np.array([[1, 1], [-1, 1]]) @ np.array([[z, a * z], [a.conjugate(), 1]])
        point = [z]
        self.assertAlmostEqual(quad.psi(point), product[0, 0])
        self.assertAlmostEqual(quad.psi_star(point), product[0, 1])
        self.assertAlmostEqual(-quad.phi(point), product[1, 0])
        self.assertAlmostEqual(quad.phi_star(point), product[1, 1])

    def test_exact_identities(self):
        for n in range(EXACT.m + 1):
            self.assertEqual(determinant_residual(EXACT, n), 0)
            self.assertEqual(star_residuals(EXACT, n), (0, 0))
            self.assertEqual(sign_flip_residual(EXACT, n), 0)
        for n in range(EXACT.m):
            self.assertEqual(downward_residual(EXACT, n), 0)
            self.assertEqual(upward_residual(EXACT, n), 0)

    def test_exact_and_float_data_cached_apart(self):
        exact = SchurData(1, [0, Fraction(1, 2)], [1])
        floating = SchurData(1, [0, 0.5], [1])
        self.assertEqual(exact, floating)
        self.assertIsInstance(build_quads(exact)[1].psi_star.coefficient((1,)), Fraction)
        self.assertIsInstance(build_quads(floating)[1].psi_star.coefficient((1,)), complex)
        self.assertIsInstance(build_quads(exact)[1].psi_star.coefficient((1,)), Fraction)

    def test_floating_identities(self):
        data = SchurData.random(2, 3, np.random.default_rng(1))
        self.assertLess(determinant_residual(data, 3), 1e-12)
        self.assertLess(max(star_residuals(data, 3)), 1e-12)
        self.assertLess(downward_residual(data, 2), 1e-12)

    def test_phi_star_constant_term(self):
        for quad in build_quads(TWO_VARIABLE):
            self.assertEqual(quad.phi_star.constant_term, 1)


class EvaluationTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(2)

    def test_simple_values(self):
        self.assertEqual(eval_convergent(TWO_VARIABLE, 0, [0.3, 0.1j]), 0)
        self.assertAlmostEqual(eval_convergent(SchurData(1, [0, 0.5], [1]), 1, [1]), 0.5)
        self.assertAlmostEqual(eval_g(TWO_VARIABLE, 0, [0.5, 0.5]), 1)

    def test_convergents_are_contractive_on_torus(self):
        for _ in range(3):
            data = SchurData.random(2, 5, self.rng, radius=0.9)
            values = eval_convergent(data, data.m, torus_points(self.rng, 2, 1000))
            self.assertLess(np.max(np.abs(values)), 1)

    def test_direct_evaluation_agrees(self):
        points = polydisk_points(self.rng, 2, 50)
        for n in range(TWO_VARIABLE.m + 1):
            np.testing.assert_allclose(
                eval_direct(TWO_VARIABLE, n, points), eval_convergent(TWO_VARIABLE, n, points), atol=1e-12,
            )

    def test_tail(self):
        z = [0.4 + 0.1j, -0.6j]
        expected = TWO_VARIABLE.r[4] * z[0]
        self.assertAlmostEqual(eval_tail(TWO_VARIABLE, 3, z), expected)
        for n in range(TWO_VARIABLE.m):
            self.assertEqual(eval_tail(TWO_VARIABLE, n, [0, 0]), 0)

    def test_recombination_gives_full_function(self):
        points = polydisk_points(self.rng, 2, 40)
        full = eval_convergent(TWO_VARIABLE, TWO_VARIABLE.m, points)
        for n in range(TWO_VARIABLE.m + 1):
            np.testing.assert_allclose(eval_recombined(TWO_VARIABLE, n, points), full, atol=1e-12)

    def test_b_matches_modulus_of_convergent_on_torus(self):
        points = torus_points(self.rng, 2, 200)
        np.testing.assert_allclose(
            np.abs(eval_b(TWO_VARIABLE, 2, points)), np.abs(eval_convergent(TWO_VARIABLE, 2, points)), atol=1e-12,
        )

    def test_pointwise_identities(self):
        points = torus_points(self.rng, 2, 500)
        for n in range(TWO_VARIABLE.m + 1):
            self.assertLess(real_part_residual(TWO_VARIABLE, n, points), 1e-10)
            self.assertLess(transmission_residual(TWO_VARIABLE, n, points), 1e-12)
            self.assertLess(tail_identity_residual(TWO_VARIABLE, n, points), 1e-10)

    def test_zero_free(self):
        smallest_phi_star, smallest_sum = zero_free_margin(TWO_VARIABLE, grid_points=16, samples=200, rng=self.rng)
        self.assertGreater(smallest_phi_star, 0)
        self.assertGreater(smallest_sum, 0)

    def test_points_outside_polydisk(self):
        with self.assertRaises(ValidationError):
            eval_convergent(TWO_VARIABLE, 1, [2, 0])


class TaylorTest(SimpleTestCase):
    def test_low_order_coefficients(self):
        r1, r2 = 0.3 - 0.1j, 0.5j
        data = SchurData(2, [0, r1, r2], [1, 2])
        series = taylor_from_weights(data, 3)
        self.assertAlmostEqual(series.coefficient((1, 0)), r1)
        self.assertAlmostEqual(series.coefficient((1, 1)), (1 - abs(r1) ** 2) * r2)

    def test_level_zero_is_zero(self):
        quad = build_quads(TWO_VARIABLE)[0]
        self.assertTrue(taylor_from_rational(quad, 5).is_zero())

    def test_geometric_expansion(self):
        r1, r2 = 0.5, -0.25j
        data = SchurData(1, [0, r1, r2], [1, 1])
        series = taylor_from_rational(build_quads(data)[2], 4)
        # z (r1 + r2 z) / (1 + conj(r1) r2 z)
        q = -r1 * r2
        expected = [0, r1, r2 + r1 * q, r2 * q + r1 * q ** 2, r2 * q ** 2 + r1 * q ** 3]
        for k, value in enumerate(expected):
            self.assertAlmostEqual(series.coefficient((k,)), value)

    def test_weights_agree_with_power_series(self):
        rng = np.random.default_rng(4)
        for dimension, steps, degree in ((1, 5, 6), (2, 4, 5), (3, 6, 4)):
            with self.subTest(dimension=dimension):
                data = SchurData.random(dimension, steps, rng)
                weights = taylor_from_weights(data, degree)
                rational = taylor_from_rational(build_quads(data)[steps], degree)
                self.assertLess(weights.distance(rational), 1e-10)


class SchurAlgorithmTest(SimpleTestCase):
    def test_half_z(self):
        parameters = schur_algorithm_1d([0, 0.5], [1])
        np.testing.assert_allclose(parameters, [0, 0.5, 0], atol=1e-15)

    def test_zero_function(self):
        self.assertEqual(schur_algorithm_1d([0], [1]), [0])

    def test_round_trip(self):
        r = [0, 0.2, -0.3j, 0.4]
        numerator, denominator = univariate_rational(SchurData(1, r, [1, 1, 1]))
        parameters = schur_algorithm_1d(numerator, denominator)
        np.testing.assert_allclose(parameters[:4], r, atol=1e-10)
        self.assertTrue(all(abs(value) < 1e-10 for value in parameters[4:]))

    def test_later_parameters_not_damped(self):
        data = SchurData.random(1, 5, np.random.default_rng(4))
        parameters = schur_algorithm_1d(*univariate_rational(data))
        self.assertEqual(len(parameters), 7)
        np.testing.assert_allclose(parameters[:6], data.r, atol=1e-9)
        self.assertLess(abs(parameters[6]), 1e-9)

    def test_boundary_parameter_reported(self):
        with self.assertRaises(SchurParameterError) as caught:
            schur_algorithm_1d([0, 2], [1])
        self.assertEqual(caught.exception.index, 1)

    def test_diagonal_restriction(self):
        h = TorusPoly(2, {(1, 0): 0.25, (0, 1): 0.25})
        parameters = schur_algorithm_1d(diagonal_restriction(h), [1])
        self.assertAlmostEqual(np.prod([1 - abs(value) ** 2 for value in parameters]), 0.75)


class SubstitutionTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(9)

    def test_identity(self):
        substituted = substitute(TWO_VARIABLE, MonomialSubstitution.identity(2))
        self.assertEqual(substituted, TWO_VARIABLE)

    def test_single_step_to_two_variables(self):
        r1 = 0.4 - 0.2j
        sub = MonomialSubstitution(((1, 1),), 2)
        substituted = substitute(SchurData(1, [0, r1], [1]), sub)
        self.assertEqual(substituted.nu, (1, 2))
        points = polydisk_points(self.rng, 2, 20)
        np.testing.assert_allclose(
            eval_convergent(substituted, substituted.m, points), r1 * points[:, 0] * points[:, 1], atol=1e-14,
        )

    def test_pointwise_equality(self):
        data = SchurData.random(2, 3, self.rng)
        sub = MonomialSubstitution(((2, 0, 1), (0, 1, 1)), 3)
        substituted = substitute(data, sub)
        points = polydisk_points(self.rng, 3, 100)
        for j in range(data.m + 1):
            np.testing.assert_allclose(
                eval_convergent(substituted, substituted_level(sub, data, j), points),
                eval_convergent(data, j, apply_substitution(sub, points)),
                atol=1e-12,
            )


class SchurModelSerializerTest(SimpleTestCase):
    def test_parse(self):
        serializer = SchurModelSerializer(data={'d': 2, 'r': [[0, 0], [0.3, 0], [0, -0.4]], 'nu': [1, 2]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), SchurData(2, [0, 0.3, -0.4j], [1, 2]))

    def test_nonstandard_rejected(self):
        serializer = SchurModelSerializer(data={'d': 1, 'r': [[0.1, 0], [0.3, 0]], 'nu': [1]})
        self.assertFalse(serializer.is_valid())
        self.assertIn('r', serializer.errors)


class SchurCommandTest(SimpleTestCase):
    def setUp(self):
        handle, self.path = tempfile.mkstemp(suffix='.json')
        with os.fdopen(handle, 'w') as stream:
            json.dump(SchurModelSerializer(TWO_VARIABLE).data, stream)

    def tearDown(self):
        os.remove(self.path)

    def test_quads(self):
        out = StringIO()
        call_command('schur', 'quads', self.path, '--level', '2', stdout=out)
        payload = json.loads(out.getvalue())
        self.assertEqual(payload['level'], 2)
        self.assertEqual(payload['phi_star']['dim'], 2)

    def test_taylor_methods_agree(self):
        out = StringIO()
        call_command('schur', 'taylor', self.path, '--degree', '4', stdout=out)
        self.assertLess(json.loads(out.getvalue())['max_difference'], 1e-10)

    def test_parameters_from_coefficients(self):
        out = StringIO()
        call_command('schur', 'parameters', '--numerator', '0,0.5', stdout=out)
        self.assertEqual(out.getvalue().splitlines()[1], 'r_1 = 0.5 +0i')

    def test_bad_level(self):
        with self.assertRaises(CommandError):
            call_command('schur', 'quads', self.path, '--level', '9', stdout=StringIO())
