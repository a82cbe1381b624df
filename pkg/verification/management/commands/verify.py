import json

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError as SerializerValidationError

from torus_schur.exceptions import NumericalError
from verification.operations import render_table, run_verify_all
from verification.serializers import ReportSerializer, load_run_config


class Command(BaseCommand):
    help = 'Run every numeric check on the bundled or configured fixtures.'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)
        run = actions.add_parser('all', help='The whole suite; exits non-zero when a check fails.')
        run.add_argument('--config', default=None, help='JSON run configuration.')
        run.add_argument('--out', default=None, help='Path of the JSON report.')
        run.add_argument('--parallel', action='store_true', help='Run checks on TORUS_THREADS workers.')
        run.add_argument('--timings', action='store_true', help='Record wall-clock runtime per check.')

    def handle(self, *args, **options):
        overrides = {name: True for name in ('parallel', 'timings') if options[name]}
        try:
            config = load_run_config(options['config'], **overrides)
            report = run_verify_all(config)
        except (ValidationError, SerializerValidationError) as exc:
            raise CommandError(f'Invalid configuration: {exc}') from exc
        except (NumericalError, OSError) as exc:
            raise CommandError(str(exc)) from exc

        self.stdout.write(render_table(report))
        if options['out']:
            with open(options['out'], 'w', encoding='utf-8') as handle:
                json.dump(ReportSerializer(report).data, handle, indent=2)
                handle.write('\n')
            self.stdout.write(f"Wrote report to {options['out']}")
        if not report.passed:
            raise CommandError(f'{len(report.failures)} of {len(report.records)} checks failed.')
        self.stdout.write(self.style.SUCCESS(f'All {len(report.records)} checks passed.'))
