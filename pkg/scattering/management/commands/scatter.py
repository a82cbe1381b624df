from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from scattering.operations import eigen_table, phi


class Command(BaseCommand):
    help = 'Print scattering polynomials or check the eigenvalue identity on a (p, q) range.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        show = actions.add_parser('phi', help='Print phi^(p,q) in canonical text form.')
        show.add_argument('p', type=int)
        show.add_argument('q', type=int)

        check = actions.add_parser('verify', help='Check -(1 - z zbar) dzbar dz phi = p q phi exactly.')
        check.add_argument('--pmax', type=int, default=12)
        check.add_argument('--qmax', type=int, default=12)

    def handle(self, *args, **options):
        try:
            if options['action'] == 'phi':
                self.stdout.write(str(phi(options['p'], options['q'])))
                return
            self._verify(options['pmax'], options['qmax'])
        except ValidationError as exc:
            raise CommandError('; '.join(exc.messages)) from exc

    def _verify(self, pmax, qmax):
        rows = eigen_table(pmax, qmax)
        self.stdout.write(f"{'p':>3} {'q':>3}  result")
        for p, q, ok in rows:
            self.stdout.write(f'{p:>3} {q:>3}  {"pass" if ok else "FAIL"}')
        failures = sum(1 for *_, ok in rows if not ok)
        if failures:
            raise CommandError(f'{failures} of {len(rows)} scattering polynomials fail the eigenvalue identity.')
        self.stdout.write(self.style.SUCCESS(f'All {len(rows)} scattering polynomials pass.'))
