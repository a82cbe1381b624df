import json

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError as SerializerValidationError

from polycore.serializers import TorusPolySerializer
from schur.operations import (
    quad_at, schur_algorithm_1d, taylor_from_rational, taylor_from_weights, univariate_rational,
)
from schur.serializers import load_schur_model
from torus_schur.exceptions import NumericalError


def _complex_list(text):
    return [complex(item.strip().replace(' ', '')) for item in text.split(',') if item.strip()]


class Command(BaseCommand):
    help = 'Build Schur polynomial families, Taylor coefficients and univariate Schur parameters.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        quads = actions.add_parser('quads', help='Print Psi, Psi*, Phi, Phi* at one level as JSON.')
        quads.add_argument('model')
        quads.add_argument('--level', type=int, default=None, help='Defaults to the top level m.')

        taylor = actions.add_parser('taylor', help='Taylor coefficients of f_m as JSON.')
        taylor.add_argument('model')
        taylor.add_argument('--degree', type=int, default=4)
        taylor.add_argument('--method', choices=['weights', 'rational', 'both'], default='both')

        parameters = actions.add_parser('parameters', help='Schur algorithm for a univariate rational function.')
        parameters.add_argument('model', nargs='?', help='d = 1 model file; its f_m is inverted.')
        parameters.add_argument('--numerator', help='Ascending coefficients, e.g. "0,0.5".')
        parameters.add_argument('--denominator', default='1')
        parameters.add_argument('--max-steps', type=int, default=None)

    def handle(self, *args, **options):
        try:
            handler = getattr(self, f"_{options['action']}")
            handler(options)
        except (ValidationError, SerializerValidationError) as exc:
            raise CommandError(f'Invalid input: {exc}') from exc
        except NumericalError as exc:
            raise CommandError(str(exc)) from exc

    def _quads(self, options):
        data = load_schur_model(options['model'])
        level = data.m if options['level'] is None else options['level']
        quad = quad_at(data, level)
        payload = {
            'level': quad.level,
            **{name: TorusPolySerializer(getattr(quad, name)).data
               for name in ('psi', 'psi_star', 'phi', 'phi_star')},
        }
        self.stdout.write(json.dumps(payload, indent=2))

    def _taylor(self, options):
        data = load_schur_model(options['model'])
        degree, method = options['degree'], options['method']
        series = {}
        if method in ('weights', 'both'):
            series['weights'] = taylor_from_weights(data, degree)
        if method in ('rational', 'both'):
            series['rational'] = taylor_from_rational(quad_at(data, data.m), degree)
        payload = {'degree': degree, **{name: TorusPolySerializer(poly).data for name, poly in series.items()}}
        if method == 'both':
            payload['max_difference'] = series['weights'].distance(series['rational'])
        self.stdout.write(json.dumps(payload, indent=2))

    def _parameters(self, options):
        if options['model']:
            numerator, denominator = univariate_rational(load_schur_model(options['model']))
        elif options['numerator']:
            numerator, denominator = _complex_list(options['numerator']), _complex_list(options['denominator'])
        else:
            raise CommandError('Give a model file or --numerator.')
        max_steps = options['max_steps'] or settings.TORUS_MAX_SCHUR_STEPS
        for index, value in enumerate(schur_algorithm_1d(numerator, denominator, max_steps)):
            self.stdout.write(f'r_{index} = {value.real:.15g} {value.imag:+.15g}i')
