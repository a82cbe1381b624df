import logging

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError as SerializerValidationError

from layered.operations import phase_discrepancy, sweep, trace_check
from layered.serializers import load_medium
from torus_schur.exceptions import NumericalError
from torus_schur.output import write_csv

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Reflection spectra and trace-formula tables for step-impedance media.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        spectrum = actions.add_parser('sweep', help='R(omega) on omega_k = k omega_max / n.')
        spectrum.add_argument('medium')
        spectrum.add_argument('--omega-max', dest='omega_max', type=float, default=100.0)
        spectrum.add_argument('--n', type=int, default=4096)
        spectrum.add_argument('--source', choices=['schur', 'ode'], default='schur')
        spectrum.add_argument('--out', default=None, help='CSV path; stdout when omitted.')

        trace = actions.add_parser('trace', help='Frequency averages of log(1 - |R|^2) against sum log(1 - r_j^2).')
        trace.add_argument('medium')
        trace.add_argument('--L', dest='schedule', default=None, help='Comma-separated half-lengths.')
        trace.add_argument('--out', default=None)

    def handle(self, *args, **options):
        try:
            medium = load_medium(options['medium'])
            getattr(self, f"_{options['action']}")(medium, options)
        except (ValidationError, SerializerValidationError) as exc:
            raise CommandError(f'Invalid input: {exc}') from exc
        except NumericalError as exc:
            raise CommandError(str(exc)) from exc

    def _sweep(self, medium, options):
        spectrum = sweep(medium, options['omega_max'], options['n'], options['source'])
        write_csv(self.stdout, options['out'], ['omega', 're_R', 'im_R', 'abs_R2'], spectrum.rows())
        if options['out'] is not None:
            discrepancy = phase_discrepancy(medium, spectrum.omegas)
            self.stdout.write(f'max |R_ode - R_schur| {discrepancy:.3e}')

    def _trace(self, medium, options):
        if options['schedule']:
            schedule = [float(item) for item in options['schedule'].split(',') if item.strip()]
        else:
            schedule = list(settings.TORUS_L_SCHEDULE)
        rows = trace_check(medium, schedule)
        write_csv(self.stdout, options['out'], ['L', 'average', 'reference', 'abs_error'], rows)
        logger.info('Trace table: final error %.3e at L=%g', rows[-1][3], rows[-1][0])
