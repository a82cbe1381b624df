import csv
import json
import math
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.test import SimpleTestCase

from polycore.models import TorusPoly
from schur.models import SchurData
from schur.operations import eval_convergent
from schur.serializers import SchurModelSerializer

from .models import MeasureWeight, TorusGrid, TorusLine
from .operations import (
    almost_periodic_spectrum, comparison_check, enumerate_zeta_monomials, error_settles, evaluate_spectrum, gram,
    gram_reference, integrate, is_strictly_increasing, line_average, line_szego, log_density_integral,
    measure_mass, nyquist_step, outer_integral, poisson_check, radial_lambda, star_mean, star_orthogonality,
    szego_integral, szego_log_w, szego_reference,
)

TWO_VARIABLE = SchurData(2, [0, 0.3, -0.4j, 0.2 + 0.2j, -0.35], [1, 2, 2, 1])
SMALL = SchurData(2, [0, 0.3, 0.4j], [1, 2])


class GridTest(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(ValidationError):
            TorusGrid(2, 1)
        with self.assertRaises(ValidationError):
            TorusLine([1.0, 0.0])
        with self.assertRaises(ValidationError):
            MeasureWeight(SMALL, 3)

    def test_default_sizes(self):
        self.assertEqual(TorusGrid.default(2).points_per_axis, 64)
        self.assertEqual(TorusGrid.default(3).points_per_axis, 32)
        self.assertEqual(TorusGrid(2, 8).nodes().shape, (64, 2))

    def test_low_order_modes(self):
        grid = TorusGrid(2, 16)
        self.assertAlmostEqual(integrate(grid, lambda z: np.ones(z.shape[:-1])), 1.0)
        self.assertLess(abs(integrate(grid, lambda z: z[..., 0])), 1e-15)
        self.assertLess(abs(integrate(grid, lambda z: z[..., 0] ** 3 * z[..., 1] ** 15)), 1e-14)

    def test_non_finite_integrand(self):
        with self.assertRaises(ValidationError):
            integrate(TorusGrid(1, 4), lambda z: 1 / (z[..., 0] - 1))


class SzegoTest(SimpleTestCase):
    def test_single_parameter(self):
        data = SchurData(1, [0, 0.5], [1])
        self.assertAlmostEqual(szego_integral(data, TorusGrid(1, 64)), math.log(0.75), delta=1e-10)

    def test_two_variables(self):
        value = szego_integral(SMALL, TorusGrid(2, 64))
        self.assertAlmostEqual(value, math.log(0.91) + math.log(0.84), delta=1e-8)

    def test_zero_parameters(self):
        data = SchurData(2, [0, 0, 0], [1, 2])
        self.assertEqual(szego_integral(data, TorusGrid(2, 8)), 0)
        self.assertEqual(szego_log_w(data, TorusGrid(2, 8)), 0)

    def test_log_density_matches_reference(self):
        data = SchurData.random(2, 4, np.random.default_rng(17))
        grid = TorusGrid(2, 128)
        self.assertAlmostEqual(szego_log_w(data, grid), szego_reference(data), delta=1e-8)
        self.assertLess(abs(outer_integral(data, grid)), 1e-8)

    def test_counterexample(self):
        h = TorusPoly(2, {(1, 0): 0.25, (0, 1): 0.25})
        value = log_density_integral(h, TorusGrid(2, 64))
        self.assertAlmostEqual(value, -math.log(112 - 64 * math.sqrt(3)), delta=1e-6)
        self.assertGreater(abs(value - math.log(0.75)), 0.14)

    def test_counterexample_needs_h_zero_at_origin(self):
        with self.assertRaises(ValidationError):
            log_density_integral(TorusPoly.constant(2, 0.1), TorusGrid(2, 8))


class MeasureTest(SimpleTestCase):
    def setUp(self):
        self.grid = TorusGrid(2, 64)

    def test_probability(self):
        self.assertAlmostEqual(measure_mass(TWO_VARIABLE, self.grid), 1.0, delta=1e-10)

    def test_gram(self):
        matrix = gram(TWO_VARIABLE, self.grid, TWO_VARIABLE.m)
        self.assertAlmostEqual(matrix[0, 0].real, 1.0, delta=1e-10)
        self.assertLess(np.max(np.abs(matrix - gram_reference(TWO_VARIABLE, TWO_VARIABLE.m))), 1e-8)

    def test_zeta_monomials(self):
        self.assertEqual(enumerate_zeta_monomials(TWO_VARIABLE, 2), [(0, 1), (1, 0), (1, 1)])
        self.assertEqual(len(enumerate_zeta_monomials(TWO_VARIABLE, 4)), 8)

    def test_star_orthogonality_and_mean(self):
        for j in range(1, TWO_VARIABLE.m + 1):
            self.assertLess(star_orthogonality(TWO_VARIABLE, self.grid, j), 1e-8)
            self.assertAlmostEqual(
                star_mean(TWO_VARIABLE, self.grid, j), float(TWO_VARIABLE.level_product(j)), delta=1e-8,
            )

    def test_poisson(self):
        lhs, rhs = poisson_check(TWO_VARIABLE, self.grid, [0, 0])
        self.assertAlmostEqual(lhs, 1.0)
        self.assertAlmostEqual(rhs, 1.0, delta=1e-10)
        lhs, rhs = poisson_check(TWO_VARIABLE, TorusGrid(2, 128), [0.5, 0.3j])
        self.assertLess(abs(lhs - rhs), 1e-8)

    def test_poisson_guard(self):
        with self.assertRaises(ValidationError):
            poisson_check(TWO_VARIABLE, self.grid, [0.95, 0])

    def test_radial_monotonicity(self):
        values = [radial_lambda(TWO_VARIABLE, self.grid, eps) for eps in (0.2, 0.4, 0.6, 0.8, 0.95)]
        self.assertTrue(is_strictly_increasing(values))
        self.assertAlmostEqual(radial_lambda(TWO_VARIABLE, self.grid, 1.0), -szego_reference(TWO_VARIABLE), delta=1e-8)

    def test_comparison(self):
        for n in range(TWO_VARIABLE.m + 1):
            result = comparison_check(TWO_VARIABLE, self.grid, n)
            self.assertAlmostEqual(result.lhs, result.rhs, delta=1e-8)
            self.assertLess(abs(result.outer), 1e-8)


class LineTest(SimpleTestCase):
    def test_constant(self):
        line = TorusLine([1.0])
        self.assertAlmostEqual(line_average(line, lambda z: np.full(z.shape[:-1], 2.5), 10, 0.1), 2.5)

    def test_single_mode_decays(self):
        line = TorusLine([1.0])
        average = line_average(line, lambda z: z[..., 0].real, 1000, 0.01)
        self.assertLess(abs(average), 2e-3)

    def test_nyquist_step(self):
        self.assertAlmostEqual(nyquist_step(TorusLine([1.0, 2.0]), 4), 2 * math.pi / 240)

    def test_szego_along_line(self):
        line = TorusLine([1.0, math.sqrt(2)])
        rows = line_szego(SMALL, line, [250, 4000])
        self.assertEqual([row[0] for row in rows], [250, 4000])
        self.assertAlmostEqual(rows[0][2], -math.log(0.91) - math.log(0.84))
        self.assertLess(rows[-1][3], 5e-3)

    def test_error_falls_over_three_doublings(self):
        rows = line_szego(TWO_VARIABLE, TorusLine([1.0, math.sqrt(2)]), [250, 500, 1000, 2000, 4000])
        errors = [row[3] for row in rows[1:]]
        self.assertTrue(all(later < earlier for earlier, later in zip(errors, errors[1:])), errors)
        self.assertTrue(error_settles(rows, doublings=3))
        self.assertFalse(error_settles(rows, doublings=4))

    def test_spectrum_reproduces_function(self):
        line = TorusLine([1.0, math.sqrt(2)])
        spectrum = almost_periodic_spectrum(SMALL, line, 40)
        self.assertAlmostEqual(spectrum[0][0], 1.0)
        self.assertAlmostEqual(spectrum[0][1], 0.3)
        omega = np.linspace(-5, 5, 11)
        np.testing.assert_allclose(
            evaluate_spectrum(spectrum, omega), eval_convergent(SMALL, SMALL.m, line.at(omega)), atol=1e-10,
        )


class TorusCommandTest(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.model = os.path.join(self.directory.name, 'model.json')
        with open(self.model, 'w', encoding='utf-8') as handle:
            json.dump(SchurModelSerializer(SMALL).data, handle)

    def tearDown(self):
        self.directory.cleanup()

    def test_szego(self):
        out = StringIO()
        call_command('torus', 'szego', self.model, '--grid', '32', stdout=out)
        self.assertIn('reference', out.getvalue())

    def test_gram_csv(self):
        path = os.path.join(self.directory.name, 'gram.csv')
        call_command('torus', 'gram', self.model, '--jmax', '2', '--grid', '32', '--out', path, stdout=StringIO())
        with open(path, encoding='utf-8') as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual(len(rows), 9)
        self.assertAlmostEqual(float(rows[0]['re']), 1.0, delta=1e-10)

    def test_line_csv(self):
        path = os.path.join(self.directory.name, 'trace.csv')
        call_command('torus', 'line', self.model, '--eta', '1,1.41421356', '--L', '300', '--out', path, stdout=StringIO())
        with open(path, encoding='utf-8') as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual([float(row['L']) for row in rows], [250.0, 300.0])

    def test_poisson(self):
        out = StringIO()
        call_command('torus', 'poisson', self.model, '--z', '0.5,0.3j', '--grid', '64', stdout=out)
        self.assertIn('Poisson integral', out.getvalue())
