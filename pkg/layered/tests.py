import csv
import json
import math
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from torusint.operations import error_settles

from .models import LayeredMedium, ReflectionSpectrum
from .operations import (
    medium_to_schur, modulus_discrepancy, phase_discrepancy, reflection_ode, reflection_schur, reversed_medium,
    sweep, trace_check,
)
from .serializers import MediumSerializer

SINGLE = LayeredMedium(2.0, [1.0], [1.0, 3.0])
THREE = LayeredMedium(4.0, [0.3, 1.0, 1.0 + math.sqrt(2)], [1.0, 2.0, 0.8, 1.5])
SETTLING = LayeredMedium(4.0, [0.3, 1.118034, 2.5322476], [1.0, 2.0, 0.8, 1.5])
SCHEDULE = [250, 500, 1000, 2000, 4000]


def random_medium(rng, layers=3):
    y = np.cumsum(rng.uniform(0.2, 1.0, size=layers))
    return LayeredMedium(float(y[-1]) + 0.5, [float(v) for v in y], [float(v) for v in rng.uniform(0.5, 3.0, size=layers + 1)])


class LayeredMediumTest(SimpleTestCase):
    def test_derived_quantities(self):
        self.assertEqual(SINGLE.reflection_parameters, (-0.5,))
        self.assertEqual(SINGLE.thicknesses, (1.0,))
        self.assertEqual(SINGLE.segments(), [(1.0, 1.0), (1.0, 3.0)])

    def test_unordered_interfaces(self):
        for y in ([1.0, 0.5], [0.0, 1.0], [1.0, 2.0]):
            with self.assertRaises(ValidationError) as caught:
                LayeredMedium(2.0, y, [1.0, 2.0, 3.0])
            self.assertIn('y', caught.exception.message_dict)

    def test_impedances(self):
        with self.assertRaises(ValidationError):
            LayeredMedium(2.0, [1.0], [1.0])
        with self.assertRaises(ValidationError):
            LayeredMedium(2.0, [1.0], [1.0, 0.0])
        with self.assertRaises(ValidationError):
            LayeredMedium(2.0, [], [1.0])

    def test_random_media_have_schur_parameters(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            self.assertTrue(all(abs(r) < 1 for r in random_medium(rng).reflection_parameters))


class MediumToSchurTest(SimpleTestCase):
    def test_single_interface(self):
        data, line = medium_to_schur(SINGLE)
        self.assertEqual(data.r, (0, -0.5))
        self.assertEqual(data.nu, (1,))
        self.assertEqual(line.eta, (1.0,))

    def test_one_variable_per_interface(self):
        data, line = medium_to_schur(THREE)
        self.assertEqual(data.nu, (1, 2, 3))
        np.testing.assert_allclose(line.eta, [0.3, 0.7, math.sqrt(2)])


class ReflectionTest(SimpleTestCase):
    def test_single_interface(self):
        omegas = np.array([-7.5, -1.0, 0.25, 3.0, 40.0])
        expected = -0.5 * np.exp(2j * omegas)
        np.testing.assert_allclose(reflection_schur(SINGLE, omegas), expected, atol=1e-14)
        np.testing.assert_allclose(reflection_ode(SINGLE, omegas), expected, atol=1e-12)
        np.testing.assert_allclose(np.abs(reflection_ode(SINGLE, omegas)), 0.5, atol=1e-12)

    def test_scalar_frequency(self):
        self.assertIsInstance(reflection_ode(SINGLE, 1.5), complex)
        self.assertIsInstance(reflection_schur(SINGLE, 1.5), complex)

    def test_equal_impedances(self):
        medium = LayeredMedium(3.0, [0.5, 1.7], [2.0, 2.0, 2.0])
        omegas = np.linspace(0.5, 50, 25)
        np.testing.assert_allclose(reflection_schur(medium, omegas), 0, atol=1e-15)
        np.testing.assert_allclose(reflection_ode(medium, omegas), 0, atol=1e-12)

    def test_zero_frequency_excluded(self):
        with self.assertRaises(ValidationError):
            reflection_ode(SINGLE, 0.0)

    def test_cross_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            medium = random_medium(rng)
            omegas = rng.uniform(-100, 100, size=1000)
            self.assertLess(modulus_discrepancy(medium, omegas), 1e-10)
            self.assertLess(phase_discrepancy(medium, omegas), 1e-9)

    def test_energy_bound(self):
        omegas = np.linspace(-100, 100, 2000)
        self.assertLess(np.max(np.abs(reflection_ode(THREE, omegas))), 1)

    def test_reversal_preserves_modulus(self):
        rng = np.random.default_rng(2)
        medium = random_medium(rng)
        mirrored = reversed_medium(medium)
        self.assertEqual(mirrored.a, tuple(reversed(medium.a)))
        omegas = rng.uniform(0.1, 60, size=200)
        np.testing.assert_allclose(
            np.abs(reflection_ode(mirrored, omegas)), np.abs(reflection_ode(medium, omegas)), atol=1e-10,
        )

    def test_last_segment_length_is_irrelevant(self):
        longer = LayeredMedium(THREE.b + 5.0, THREE.y, THREE.a)
        omegas = np.linspace(0.1, 30, 50)
        np.testing.assert_allclose(reflection_ode(longer, omegas), reflection_ode(THREE, omegas), atol=1e-10)


class SpectrumTest(SimpleTestCase):
    def test_sweep(self):
        spectrum = sweep(SINGLE, 10.0, 8)
        np.testing.assert_allclose(spectrum.omegas, np.arange(1, 9) * 1.25)
        np.testing.assert_allclose(spectrum.energy, 0.25)
        ode = sweep(SINGLE, 10.0, 8, source='ode')
        self.assertEqual(ode.source, 'ode')
        np.testing.assert_allclose(ode.R, spectrum.R, atol=1e-12)
        self.assertEqual(len(spectrum.rows()), 8)

    def test_energy_bound_enforced(self):
        with self.assertRaises(ValidationError):
            ReflectionSpectrum([1.0], [1.0])
        with self.assertRaises(ValidationError):
            ReflectionSpectrum([1.0], [0.5], source='fdtd')

    def test_bad_sweep(self):
        with self.assertRaises(ValidationError):
            sweep(SINGLE, 0, 8)


class TraceTest(SimpleTestCase):
    def test_single_interface_is_exact(self):
        for L, average, reference, error in trace_check(SINGLE, [10] + SCHEDULE):
            self.assertAlmostEqual(reference, math.log(0.75))
            self.assertLess(error, 1e-10)

    def test_equal_impedances(self):
        medium = LayeredMedium(2.0, [0.5, 1.2], [1.0, 1.0, 1.0])
        for row in trace_check(medium, [10, 20]):
            self.assertEqual(row[1:], (0.0, 0.0, 0.0))

    def test_incommensurate_medium(self):
        rows = trace_check(THREE, [4000])
        reference = sum(math.log(1 - r ** 2) for r in THREE.reflection_parameters)
        self.assertAlmostEqual(rows[0][2], reference)
        self.assertLess(rows[0][3], 1e-2)

    def test_error_falls_across_schedule(self):
        errors = [row[3] for row in trace_check(SETTLING, SCHEDULE)]
        self.assertTrue(all(later < earlier for earlier, later in zip(errors, errors[1:])), errors)
        self.assertLess(errors[-1], 1e-4)

    def test_error_growth_is_detected(self):
        rows = trace_check(THREE, [1000, 2000, 4000])
        self.assertLess(rows[-1][3], 1e-2)
        self.assertGreater(rows[-1][3], rows[-2][3])
        self.assertFalse(error_settles(rows))
        self.assertFalse(error_settles(rows, doublings=1))
        self.assertTrue(error_settles(rows[:2], doublings=1))


class MediumSerializerTest(SimpleTestCase):
    def test_parse(self):
        serializer = MediumSerializer(data={'b': 4.0, 'y': [0.3, 1.0, 2.41421356], 'a': [1.0, 2.0, 0.8, 1.5]})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save().interfaces, 3)

    def test_unordered(self):
        serializer = MediumSerializer(data={'b': 1.0, 'y': [0.5, 0.2], 'a': [1, 2, 3]})
        self.assertFalse(serializer.is_valid())
        self.assertIn('y', serializer.errors)


class LayeredCommandTest(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.medium = os.path.join(self.directory.name, 'medium.json')
        with open(self.medium, 'w', encoding='utf-8') as handle:
            json.dump(MediumSerializer(SINGLE).data, handle)

    def tearDown(self):
        self.directory.cleanup()

    def test_sweep_csv(self):
        path = os.path.join(self.directory.name, 'spectrum.csv')
        out = StringIO()
        call_command('layered', 'sweep', self.medium, '--omega-max', '20', '--n', '16', '--out', path, stdout=out)
        with open(path, encoding='utf-8') as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual(len(rows), 16)
        self.assertEqual(list(rows[0]), ['omega', 're_R', 'im_R', 'abs_R2'])
        self.assertAlmostEqual(float(rows[-1]['omega']), 20.0)
        self.assertAlmostEqual(float(rows[3]['abs_R2']), 0.25)
        self.assertIn('max |R_ode - R_schur|', out.getvalue())

    def test_trace_stdout(self):
        out = StringIO()
        call_command('layered', 'trace', self.medium, '--L', '50,100', stdout=out)
        rows = list(csv.DictReader(StringIO(out.getvalue())))
        self.assertEqual([float(row['L']) for row in rows], [50.0, 100.0])
        self.assertLess(float(rows[-1]['abs_error']), 1e-10)

    def test_invalid_medium(self):
        with open(self.medium, 'w', encoding='utf-8') as handle:
            json.dump({'b': 1.0, 'y': [2.0], 'a': [1.0, 2.0]}, handle)
        with self.assertRaises(CommandError):
            call_command('layered', 'sweep', self.medium, stdout=StringIO())
