import json
import os
import tempfile
from io import StringIO

from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .models import RunConfig
from .operations import render_table, run_verify_all
from .serializers import ReportSerializer, load_run_config

SMALL_RUN = {
    'schur_fixtures': [],
    'media': ['medium_single.json'],
    'lattice_inputs': ['lattice_rational.json'],
    'eigen_max': 2,
    'l_schedule': [50],
}


class RunConfigTest(SimpleTestCase):
    def test_bundled_defaults(self):
        config = RunConfig.from_settings()
        self.assertEqual([os.path.basename(path) for path in config.schur_fixtures],
                         ['schur_d1.json', 'schur_d2.json', 'schur_d3.json'])
        self.assertEqual(len(config.media), 2)
        self.assertEqual(len(config.lattice_inputs), 3)
        self.assertEqual(config.grid_points, 64)
        self.assertEqual(config.l_schedule, (250.0, 500.0, 1000.0, 2000.0, 4000.0))

    def test_tolerance_override_merges(self):
        config = RunConfig(tolerances={'szego': 1e-9})
        self.assertEqual(config.tolerances['szego'], 1e-9)
        self.assertEqual(config.tolerances['gram'], 1e-8)

    def test_invalid(self):
        with self.assertRaises(ValidationError):
            RunConfig(tolerances={'unknown': 1.0})
        with self.assertRaises(ValidationError):
            RunConfig(grid_points=1)
        with self.assertRaises(ValidationError):
            RunConfig(l_schedule=())

    def test_load_from_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'config.json')
            with open(path, 'w', encoding='utf-8') as handle:
                json.dump({'grid_points': 16, 'tolerances': {'birkhoff': 1e-2}}, handle)
            config = load_run_config(path, parallel=True)
        self.assertEqual(config.grid_points, 16)
        self.assertEqual(config.tolerances['birkhoff'], 1e-2)
        self.assertTrue(config.parallel)
        self.assertEqual(len(config.schur_fixtures), 3)


class RunVerifyAllTest(SimpleTestCase):
    def test_symbolic_checks_only(self):
        report = run_verify_all(RunConfig(eigen_max=3))
        self.assertEqual([record.name for record in report.records],
                         ['scattering_eigen', 'counterexample', 'counterexample_gap'])
        self.assertTrue(report.passed)

    def test_coarse_grid_fails_szego(self):
        config = RunConfig.from_settings(
            schur_fixtures=['schur_d2.json'], media=[], lattice_inputs=[], grid_points=4, eigen_max=1,
            l_schedule=[50],
        )
        records = {record.name: record for record in run_verify_all(config).records}
        self.assertFalse(records['szego:schur_d2'].passed)
        self.assertTrue(records['structure:schur_d2'].passed)

    def test_deterministic_and_order_independent_of_parallelism(self):
        sequential = ReportSerializer(run_verify_all(RunConfig.from_settings(**SMALL_RUN))).data
        repeated = ReportSerializer(run_verify_all(RunConfig.from_settings(**SMALL_RUN))).data
        parallel = ReportSerializer(run_verify_all(RunConfig.from_settings(**SMALL_RUN, parallel=True, threads=3))).data
        self.assertEqual(json.dumps(sequential), json.dumps(repeated))
        self.assertEqual(json.dumps(sequential), json.dumps(parallel))
        self.assertTrue(sequential['passed'])
        self.assertIsNone(sequential['checks'][0]['runtime'])

    def test_timings(self):
        report = run_verify_all(RunConfig(eigen_max=1, timings=True))
        self.assertTrue(all(record.runtime >= 0 for record in report.records))

    def test_bundled_fixtures(self):
        report = run_verify_all(RunConfig.from_settings(l_schedule=[1000, 4000]))
        names = [record.name for record in report.records]
        self.assertEqual(names[0], 'scattering_eigen')
        self.assertIn('birkhoff:schur_d2', names)
        self.assertNotIn('gram:schur_d3', names)
        self.assertEqual(names[-2:], ['reflection:medium_three', 'trace:medium_three'])
        for record in report.records:
            if record.name.split(':')[0] in {
                'scattering_eigen', 'structure', 'taylor', 'round_trip', 'counterexample', 'counterexample_gap',
                'lattice', 'reflection', 'trace', 'birkhoff',
            }:
                self.assertTrue(record.passed, f'{record.name}: {record.value} vs {record.reference} ({record.detail})')

    def test_trace_trend_over_full_schedule(self):
        config = RunConfig.from_settings(
            schur_fixtures=[], media=['medium_single.json', 'medium_three.json'], lattice_inputs=[], eigen_max=1,
            l_schedule=[250, 500, 1000, 2000, 4000],
        )
        records = {record.name: record for record in run_verify_all(config).records}
        self.assertTrue(records['trace:medium_single'].passed)
        self.assertTrue(records['trace:medium_three'].passed, records['trace:medium_three'].detail)
        self.assertIn('non-increasing', records['trace:medium_three'].detail)

    def test_trace_fails_when_error_grows(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'medium_oscillating.json')
            with open(path, 'w', encoding='utf-8') as handle:
                json.dump({'b': 4.0, 'y': [0.3, 1.0, 2.41421356], 'a': [1.0, 2.0, 0.8, 1.5]}, handle)
            config = RunConfig.from_settings(
                schur_fixtures=[], media=[path], lattice_inputs=[], eigen_max=1, l_schedule=[1000, 2000, 4000],
            )
            records = {record.name: record for record in run_verify_all(config).records}
        trace = records['trace:medium_oscillating']
        self.assertLess(abs(trace.value - trace.reference), trace.tolerance)
        self.assertFalse(trace.passed)
        self.assertIn('grew', trace.detail)
        self.assertTrue(records['reflection:medium_oscillating'].passed)

    def test_table(self):
        report = run_verify_all(RunConfig(eigen_max=1))
        lines = render_table(report).splitlines()
        self.assertEqual(len(lines), 2 + len(report.records))
        self.assertTrue(lines[2].startswith('scattering_eigen'))
        self.assertIn('pass', lines[2])


class VerifyCommandTest(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.config = os.path.join(self.directory.name, 'config.json')

    def tearDown(self):
        self.directory.cleanup()

    def _write_config(self, payload):
        with open(self.config, 'w', encoding='utf-8') as handle:
            json.dump(payload, handle)

    def test_passing_run_writes_report(self):
        self._write_config(SMALL_RUN)
        report_path = os.path.join(self.directory.name, 'report.json')
        out = StringIO()
        call_command('verify', 'all', '--config', self.config, '--out', report_path, stdout=out)
        self.assertIn('All 6 checks passed.', out.getvalue())
        with open(report_path, encoding='utf-8') as handle:
            report = json.load(handle)
        self.assertTrue(report['passed'])
        self.assertEqual(
            [check['name'] for check in report['checks']],
            ['scattering_eigen', 'counterexample', 'counterexample_gap', 'lattice:lattice_rational',
             'reflection:medium_single', 'trace:medium_single'],
        )

    def test_failing_run(self):
        self._write_config({
            'schur_fixtures': ['schur_d2.json'], 'media': [], 'lattice_inputs': [], 'grid_points': 4,
            'eigen_max': 1, 'l_schedule': [50],
        })
        with self.assertRaises(CommandError):
            call_command('verify', 'all', '--config', self.config, stdout=StringIO())

    def test_bad_config(self):
        self._write_config({'grid_points': 1})
        with self.assertRaises(CommandError):
            call_command('verify', 'all', '--config', self.config, stdout=StringIO())
