import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError as SerializerValidationError

from schur.serializers import load_schur_model
from torus_schur.exceptions import NumericalError
from torus_schur.output import write_csv
from torusint.models import TorusGrid, TorusLine
from torusint.operations import (
    gram, gram_reference, line_szego, nyquist_step, outer_integral, poisson_check, szego_integral,
    szego_log_w, szego_reference,
)


def _floats(text):
    return [float(item) for item in text.split(',') if item.strip()]


def _complexes(text):
    return [complex(item.strip()) for item in text.split(',') if item.strip()]


class Command(BaseCommand):
    help = 'Szego integrals, Gram matrices, Poisson checks and torus-line averages for a Schur model.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        szego = actions.add_parser('szego', help='Grid integrals of log(1 - |f|^2) and log w against their reference.')
        szego.add_argument('model')
        szego.add_argument('--grid', type=int, default=None)

        matrix = actions.add_parser('gram', help='Gram matrix of Phi_0..Phi_jmax in L2(mu_f).')
        matrix.add_argument('model')
        matrix.add_argument('--jmax', type=int, default=None)
        matrix.add_argument('--grid', type=int, default=None)
        matrix.add_argument('--out', default=None, help='CSV path; stdout when omitted.')

        line = actions.add_parser('line', help='Averages of -log(1 - |f|^2) along a torus line.')
        line.add_argument('model')
        line.add_argument('--eta', required=True, help='Comma-separated positive frequencies.')
        line.add_argument('--L', dest='length', type=float, default=None, help='Largest half-length.')
        line.add_argument('--out', default=None)

        poisson = actions.add_parser('poisson', help='Poisson reproduction of Re((1 + f)/(1 - f)) at a point.')
        poisson.add_argument('model')
        poisson.add_argument('--z', required=True, help='Comma-separated complex coordinates, e.g. "0.5,0.3j".')
        poisson.add_argument('--grid', type=int, default=None)

    def handle(self, *args, **options):
        try:
            data = load_schur_model(options['model'])
            getattr(self, f"_{options['action']}")(data, options)
        except (ValidationError, SerializerValidationError) as exc:
            raise CommandError(f'Invalid input: {exc}') from exc
        except NumericalError as exc:
            raise CommandError(str(exc)) from exc

    def _grid(self, data, options):
        if options.get('grid'):
            return TorusGrid(data.dimension, options['grid'])
        return TorusGrid.default(data.dimension, settings.TORUS_GRID_POINTS, settings.TORUS_GRID_POINTS_3D)

    def _szego(self, data, options):
        grid = self._grid(data, options)
        reference = szego_reference(data)
        for name, value in (
            ('log(1-|f|^2)', szego_integral(data, grid)),
            ('log w', szego_log_w(data, grid)),
        ):
            self.stdout.write(f'{name:<14} {value: .15f}  reference {reference: .15f}  error {abs(value - reference):.3e}')
        self.stdout.write(f"{'log|1-f|':<14} {outer_integral(data, grid): .15f}  reference  0")

    def _gram(self, data, options):
        jmax = data.m if options['jmax'] is None else options['jmax']
        matrix = gram(data, self._grid(data, options), jmax)
        reference = gram_reference(data, jmax)
        rows = [
            (j, k, matrix[j, k].real, matrix[j, k].imag, reference[j, k].real)
            for j in range(jmax + 1) for k in range(jmax + 1)
        ]
        write_csv(self.stdout, options['out'], ['j', 'k', 're', 'im', 'reference'], rows)
        self.stdout.write(f'max deviation {np.max(np.abs(matrix - reference)):.3e}')

    def _line(self, data, options):
        line = TorusLine(_floats(options['eta']))
        schedule = list(settings.TORUS_L_SCHEDULE)
        if options['length'] is not None:
            schedule = [L for L in schedule if L < options['length']] + [options['length']]
        rows = line_szego(data, line, schedule, nyquist_step(line, data.m))
        write_csv(self.stdout, options['out'], ['L', 'average', 'reference', 'abs_error'], rows)

    def _poisson(self, data, options):
        lhs, rhs = poisson_check(data, self._grid(data, options), _complexes(options['z']))
        self.stdout.write(f'Re((1+f)/(1-f)) {lhs:.15f}  Poisson integral {rhs:.15f}  error {abs(lhs - rhs):.3e}')
