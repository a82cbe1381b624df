import json

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError as SerializerValidationError

from freqlattice.models import RationalBasisInput
from freqlattice.operations import decompose, line_factorization_error, verify
from freqlattice.serializers import LatticeDecompositionSerializer, load_lattice_input
from torus_schur.exceptions import NumericalError


class Command(BaseCommand):
    help = 'Write torus-line frequencies eta = B b as A q with A a non-negative integer matrix.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)
        run = actions.add_parser('decompose', help='Decompose the frequencies of a basis file.')
        run.add_argument('--B', dest='basis', required=True, help='JSON file {"B": ..., "b": ..., "field": ...}.')
        run.add_argument('--field', default=None, help='Overrides the field named in the file, e.g. "Q(sqrt2)".')
        run.add_argument('--samples', type=int, default=100)

    def handle(self, *args, **options):
        try:
            data = load_lattice_input(options['basis'])
            if options['field']:
                data = RationalBasisInput(data.B, data.b, options['field'])
            decomposition = decompose(data)
        except (ValidationError, SerializerValidationError) as exc:
            raise CommandError(f'Invalid input: {exc}') from exc
        except NumericalError as exc:
            raise CommandError(str(exc)) from exc
        omegas = np.linspace(-50, 50, options['samples'])
        payload = {
            'eta': [str(value) for value in data.eta],
            **LatticeDecompositionSerializer(decomposition).data,
            'exact': verify(decomposition, data),
            'line_factorization_error': line_factorization_error(decomposition, data, omegas),
        }
        self.stdout.write(json.dumps(payload, indent=2))
