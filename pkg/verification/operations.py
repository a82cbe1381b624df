"""
The `verify all` suite: every numeric claim of the project checked against
its reference on the configured fixtures, in a fixed order.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError
from rest_framework.exceptions import ValidationError as SerializerValidationError

from freqlattice.operations import decompose, line_factorization_error, verify
from freqlattice.serializers import load_lattice_input
from layered.operations import modulus_discrepancy, phase_discrepancy, trace_check
from layered.serializers import load_medium
from polycore.models import TorusPoly
from scattering.operations import eigen_table
from schur.operations import (
    determinant_residual, downward_residual, quad_at, real_part_residual, schur_algorithm_1d, sign_flip_residual,
    star_residuals, tail_identity_residual, taylor_from_rational, taylor_from_weights, transmission_residual,
    univariate_rational, upward_residual,
)
from schur.serializers import load_schur_model
from torus_schur.exceptions import NumericalError
from torusint.models import TorusGrid, TorusLine
from torusint.operations import (
    error_settles, gram, gram_reference, is_strictly_increasing, line_szego, log_density_integral, outer_integral,
    poisson_check, radial_lambda, szego_integral, szego_log_w, szego_reference,
)

from .models import CheckRecord, Report, resolve_path

logger = logging.getLogger(__name__)

COUNTEREXAMPLE_GRID = 256
POINTWISE_GRID = 32
RADII = (0.2, 0.4, 0.6, 0.8, 0.95)
LINE_FREQUENCIES = (1.0, math.sqrt(2))
REFLECTION_SAMPLES = 1000
OMEGA_RANGE = 100.0
LATTICE_SAMPLES = 100
TREND_DOUBLINGS = 2


class Outcome:
    """What a check function returns: the measured value and whether it passes."""

    def __init__(self, value, reference, tolerance, passed=None, detail=''):
        self.value = float(value)
        self.reference = float(reference)
        self.tolerance = float(tolerance)
        self.passed = abs(self.value - self.reference) <= self.tolerance if passed is None else bool(passed)
        self.detail = detail


def _grid(config, dimension):
    return TorusGrid.default(dimension, config.grid_points, config.grid_points_3d)


def _schur_tolerance(config, data):
    return config.tolerances['szego'] if data.dimension <= 2 else config.tolerances['szego_3d']


# Checks. Each returns an Outcome and may raise; the runner records failures.

def check_eigen(config):
    rows = eigen_table(config.eigen_max, config.eigen_max)
    failing = [(p, q) for p, q, ok in rows if not ok]
    return Outcome(len(failing), 0, 0, detail=f'{len(rows)} polynomials' + (f', failing {failing}' if failing else ''))


def check_structure(config, data):
    residuals = [determinant_residual(data, n) for n in range(data.m + 1)]
    residuals += [max(star_residuals(data, n)) for n in range(data.m + 1)]
    residuals += [sign_flip_residual(data, n) for n in range(data.m + 1)]
    residuals += [downward_residual(data, n) for n in range(data.m)]
    residuals += [upward_residual(data, n) for n in range(data.m)]
    return Outcome(max(residuals), 0, config.tolerances['structure'])


def check_pointwise(config, data):
    points = TorusGrid(data.dimension, POINTWISE_GRID).nodes()
    residuals = []
    for n in range(data.m + 1):
        residuals.append(real_part_residual(data, n, points))
        residuals.append(transmission_residual(data, n, points))
        residuals.append(tail_identity_residual(data, n, points))
    return Outcome(max(residuals), 0, config.tolerances['pointwise'])


def check_taylor(config, data):
    weights = taylor_from_weights(data, config.taylor_degree)
    rational = taylor_from_rational(quad_at(data, data.m), config.taylor_degree)
    return Outcome(weights.distance(rational), 0, config.tolerances['taylor'], detail=f'degree {config.taylor_degree}')


def check_round_trip(config, data):
    recovered = schur_algorithm_1d(*univariate_rational(data), max_steps=data.m + 2)
    expected = [complex(r) for r in data.r]
    size = max(len(recovered), len(expected))
    recovered += [0j] * (size - len(recovered))
    expected += [0j] * (size - len(expected))
    error = max(abs(a - b) for a, b in zip(recovered, expected))
    return Outcome(error, 0, config.tolerances['round_trip'])


def check_gram(config, data):
    matrix = gram(data, _grid(config, data.dimension), data.m)
    error = float(np.max(np.abs(matrix - gram_reference(data, data.m))))
    return Outcome(error, 0, config.tolerances['gram'])


def check_szego(config, data):
    return Outcome(szego_integral(data, _grid(config, data.dimension)), szego_reference(data), _schur_tolerance(config, data))


def check_szego_log_w(config, data):
    return Outcome(szego_log_w(data, _grid(config, data.dimension)), szego_reference(data), _schur_tolerance(config, data))


def check_outer(config, data):
    return Outcome(outer_integral(data, _grid(config, data.dimension)), 0, _schur_tolerance(config, data))


def check_poisson(config, data):
    z = [0.3 * 1j ** k for k in range(data.dimension)]
    lhs, rhs = poisson_check(data, _grid(config, data.dimension), z)
    return Outcome(rhs, lhs, config.tolerances['poisson'], detail=f'z = {z}')


def check_monotonicity(config, data):
    grid = _grid(config, data.dimension)
    values = [radial_lambda(data, grid, eps) for eps in RADII]
    smallest_step = min(later - earlier for earlier, later in zip(values, values[1:]))
    return Outcome(
        smallest_step, 0, 0, passed=is_strictly_increasing(values),
        detail='Lambda = ' + ', '.join(f'{value:.6g}' for value in values),
    )


def check_birkhoff(config, data):
    rows = line_szego(data, TorusLine(LINE_FREQUENCIES), config.l_schedule)
    L, average, reference, error = rows[-1]
    tolerance = config.tolerances['birkhoff']
    settles = error_settles(rows, TREND_DOUBLINGS)
    return Outcome(
        average, reference, tolerance, passed=error <= tolerance and settles,
        detail=f"L = {L:g}, error {'non-increasing' if settles else 'grew'} over the last doublings",
    )


def _counterexample_value():
    h = TorusPoly(2, {(1, 0): 0.25, (0, 1): 0.25})
    return log_density_integral(h, TorusGrid(2, COUNTEREXAMPLE_GRID))


def check_counterexample(config):
    return Outcome(_counterexample_value(), -math.log(112 - 64 * math.sqrt(3)), config.tolerances['counterexample'])


def check_counterexample_gap(config):
    gap = abs(_counterexample_value() - math.log(0.75))
    threshold = config.tolerances['counterexample_gap']
    return Outcome(gap, threshold, 0, passed=gap > threshold, detail='distance from log(3/4)')


def check_lattice(config, path):
    data = load_lattice_input(path)
    decomposition = decompose(data)
    exact = verify(decomposition, data)
    error = line_factorization_error(decomposition, data, np.linspace(-50, 50, LATTICE_SAMPLES))
    tolerance = config.tolerances['lattice_line']
    return Outcome(
        error, 0, tolerance, passed=exact and error <= tolerance,
        detail=f"A = {decomposition.A.tolist()}, t = {decomposition.certificate.get('t')}, exact = {exact}",
    )


def check_reflection(config, path):
    medium = load_medium(path)
    omegas = np.random.default_rng(config.seed).uniform(-OMEGA_RANGE, OMEGA_RANGE, size=REFLECTION_SAMPLES)
    omegas = omegas[omegas != 0]
    return Outcome(
        modulus_discrepancy(medium, omegas), 0, config.tolerances['reflection'],
        detail=f'complex discrepancy {phase_discrepancy(medium, omegas):.3e}',
    )


def check_trace(config, path):
    medium = load_medium(path)
    rows = trace_check(medium, config.l_schedule)
    L, average, reference, error = rows[-1]
    if medium.interfaces == 1:
        tolerance = config.tolerances['trace_single']
        worst = max(row[3] for row in rows)
        return Outcome(average, reference, tolerance, passed=worst <= tolerance, detail=f'worst error {worst:.3e}')
    tolerance = config.tolerances['trace_multi']
    settles = error_settles(rows, TREND_DOUBLINGS)
    return Outcome(
        average, reference, tolerance, passed=error <= tolerance and settles,
        detail=f"L = {L:g}, error {'non-increasing' if settles else 'grew'} over the last doublings",
    )


def plan(config):
    """(name, thunk) pairs in report order."""
    models = [(Path(path).stem, load_schur_model(resolve_path(path))) for path in config.schur_fixtures]
    steps = [('scattering_eigen', lambda: check_eigen(config))]

    def per_model(prefix, check, keep=lambda data: True):
        for stem, data in models:
            if keep(data):
                steps.append((f'{prefix}:{stem}', lambda data=data: check(config, data)))

    per_model('structure', check_structure)
    per_model('pointwise', check_pointwise)
    per_model('taylor', check_taylor)
    per_model('round_trip', check_round_trip, keep=lambda data: data.dimension == 1)
    per_model('gram', check_gram, keep=lambda data: data.dimension <= 2)
    per_model('szego', check_szego)
    per_model('szego_log_w', check_szego_log_w)
    per_model('outer', check_outer)
    per_model('poisson', check_poisson)
    per_model('monotonicity', check_monotonicity)
    per_model('birkhoff', check_birkhoff, keep=lambda data: data.dimension == 2)
    steps.append(('counterexample', lambda: check_counterexample(config)))
    steps.append(('counterexample_gap', lambda: check_counterexample_gap(config)))
    for path in config.lattice_inputs:
        steps.append((f'lattice:{Path(path).stem}', lambda path=resolve_path(path): check_lattice(config, path)))
    for path in config.media:
        resolved = resolve_path(path)
        steps.append((f'reflection:{Path(path).stem}', lambda path=resolved: check_reflection(config, path)))
        steps.append((f'trace:{Path(path).stem}', lambda path=resolved: check_trace(config, path)))
    return steps


def _run(name, thunk, timings):
    started = time.perf_counter()
    logger.info('Running %s', name)
    try:
        outcome = thunk()
    except (ValidationError, SerializerValidationError, NumericalError, OSError) as exc:
        logger.warning('Check %s raised: %s', name, exc)
        record = CheckRecord(name, detail=f'{type(exc).__name__}: {exc}')
    else:
        record = CheckRecord(
            name, outcome.value, outcome.reference, outcome.tolerance, outcome.passed, outcome.detail,
        )
        if not record.passed:
            logger.warning('Check %s failed: value %r, reference %r', name, record.value, record.reference)
    if timings:
        record = replace(record, runtime=time.perf_counter() - started)
    return record


def run_verify_all(config):
    """
    Run the suite and collect one record per check. With ``config.parallel``
    the checks run on ``config.threads`` workers; the report order is unchanged.
    """
    steps = plan(config)
    if config.parallel and config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            records = list(pool.map(lambda step: _run(*step, config.timings), steps))
    else:
        records = [_run(name, thunk, config.timings) for name, thunk in steps]
    report = Report(tuple(records))
    logger.info('%d of %d checks passed', len(records) - len(report.failures), len(records))
    return report


def render_table(report):
    """Fixed-width rendering of the report rows."""
    header = f"{'check':<28} {'value':>22} {'reference':>22} {'tolerance':>10}  status"
    lines = [header, '-' * len(header)]
    for record in report.records:
        value = '-' if record.value is None else f'{record.value:.15g}'
        reference = '-' if record.reference is None else f'{record.reference:.15g}'
        tolerance = '-' if record.tolerance is None else f'{record.tolerance:.1e}'
        status = 'pass' if record.passed else 'FAIL'
        line = f'{record.name:<28} {value:>22} {reference:>22} {tolerance:>10}  {status}'
        if record.detail:
            line += f'  {record.detail}'
        if record.runtime is not None:
            line += f'  ({record.runtime:.2f}s)'
        lines.append(line)
    return '\n'.join(lines)
