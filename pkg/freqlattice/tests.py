import json
import os
import tempfile
from io import StringIO

import numpy as np
import sympy
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from sympy import Rational, sqrt

from .models import LatticeDecomposition, RationalBasisInput, in_field, parse_field
from .operations import decompose, line_factorization_error, rational_approximants, verify
from .serializers import LatticeInputSerializer

MIXED = RationalBasisInput([[-1, 1], [1, 0]], [1, sqrt(2)], 'Q(sqrt2)')


class FieldTest(SimpleTestCase):
    def test_rationals(self):
        self.assertEqual(parse_field('Q'), sympy.QQ)

    def test_quadratic_field(self):
        for name in ('Q(sqrt2)', 'Q(sqrt(2))'):
            domain = parse_field(name)
            self.assertTrue(in_field(domain, 1 + sqrt(2)))
            self.assertFalse(in_field(domain, sqrt(3)))
        self.assertFalse(in_field(sympy.QQ, sqrt(2)))

    def test_bad_name(self):
        with self.assertRaises(ValidationError):
            parse_field('R')


class InputTest(SimpleTestCase):
    def test_eta(self):
        self.assertEqual(MIXED.eta, (sqrt(2) - 1, 1))

    def test_basis_outside_field(self):
        with self.assertRaises(ValidationError) as caught:
            RationalBasisInput([[1]], [sqrt(3)], 'Q(sqrt2)')
        self.assertIn('b', caught.exception.message_dict)
        with self.assertRaises(ValidationError):
            RationalBasisInput([[1]], [sqrt(2)], 'Q')

    def test_non_positive_frequency(self):
        with self.assertRaises(ValidationError):
            RationalBasisInput([[-1]], [1])

    def test_irrational_matrix_entry(self):
        with self.assertRaises(ValidationError):
            RationalBasisInput([[sqrt(2)]], [1])


class ApproximantTest(SimpleTestCase):
    def test_square_root_of_two(self):
        self.assertEqual(
            rational_approximants([1, sqrt(2)], 4),
            [(1, 1), (1, Rational(3, 2)), (1, Rational(7, 5)), (1, Rational(17, 12))],
        )

    def test_zero_convergent_skipped(self):
        self.assertEqual(rational_approximants([Rational(3, 10)], 3), [(Rational(1, 3),), (Rational(3, 10),)])


class DecomposeTest(SimpleTestCase):
    def test_integer_frequencies(self):
        result = decompose(RationalBasisInput([[2], [3]], [1]))
        self.assertEqual(result.A.tolist(), [[2], [3]])
        self.assertEqual(result.q, (1,))

    def test_rational_frequencies(self):
        result = decompose(RationalBasisInput([[Rational(1, 2)], [Rational(1, 3)]], [1]))
        self.assertEqual(result.A.tolist(), [[3], [2]])
        self.assertEqual(result.q, (Rational(1, 6),))

    def test_identity_basis(self):
        data = RationalBasisInput([[1, 0], [0, 1]], [1, sqrt(2)], 'Q(sqrt2)')
        self.assertTrue(verify(decompose(data), data))

    def test_negative_basis_entry(self):
        result = decompose(MIXED)
        self.assertTrue(verify(result, MIXED))
        self.assertEqual(result.certificate['t'], '8')
        self.assertEqual(result.A.tolist(), [[3, 37], [45, 48]])
        self.assertTrue(all(value.is_positive for value in result.q))

    def test_tampered_matrix_fails(self):
        result = decompose(MIXED)
        tampered = LatticeDecomposition(result.A - sympy.Matrix([[0, 1], [0, 0]]), result.q)
        self.assertFalse(verify(tampered, MIXED))

    def test_line_factorization(self):
        result = decompose(MIXED)
        omegas = np.linspace(-50, 50, 100)
        self.assertLess(line_factorization_error(result, MIXED, omegas), 1e-12)

    def test_negative_lattice_rejected(self):
        with self.assertRaises(ValidationError):
            LatticeDecomposition([[-1]], [1])


class LatticeInputSerializerTest(SimpleTestCase):
    def test_parse(self):
        serializer = LatticeInputSerializer(data={'B': [['-1', '1'], ['1', '0']], 'b': ['1', 'sqrt(2)'], 'field': 'Q(sqrt2)'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), MIXED)

    def test_float_rejected(self):
        serializer = LatticeInputSerializer(data={'B': [[0.5]], 'b': ['1']})
        self.assertFalse(serializer.is_valid())

    def test_ragged_matrix(self):
        serializer = LatticeInputSerializer(data={'B': [['1', '2'], ['1']], 'b': ['1', '2']})
        self.assertFalse(serializer.is_valid())


class LatticeCommandTest(SimpleTestCase):
    def setUp(self):
        handle, self.path = tempfile.mkstemp(suffix='.json')
        with os.fdopen(handle, 'w') as stream:
            json.dump({'B': [['-1', '1'], ['1', '0']], 'b': ['1', 'sqrt(2)'], 'field': 'Q(sqrt2)'}, stream)

    def tearDown(self):
        os.remove(self.path)

    def test_decompose(self):
        out = StringIO()
        call_command('lattice', 'decompose', '--B', self.path, stdout=out)
        payload = json.loads(out.getvalue())
        self.assertTrue(payload['exact'])
        self.assertEqual(payload['A'], [[3, 37], [45, 48]])
        self.assertLess(payload['line_factorization_error'], 1e-12)

    def test_field_override(self):
        with self.assertRaises(CommandError):
            call_command('lattice', 'decompose', '--B', self.path, '--field', 'Q', stdout=StringIO())
