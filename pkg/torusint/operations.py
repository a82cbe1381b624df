"""
Integrals over T^d against tau and averages along torus lines.

Grid integrals are plain means over the nodes of a TorusGrid; line averages
use the composite trapezoid rule on [-L, L].
"""
import itertools
import logging
import math
from collections import namedtuple

import numpy as np
from django.core.exceptions import ValidationError

from schur.operations import build_quads, eval_b, eval_convergent, eval_tail, quad_at
from scattering.operations import enumerate_indices, weight

from .models import MeasureWeight

logger = logging.getLogger(__name__)

NEAR_SINGULAR_MODULUS = 0.95
POISSON_RADIUS = 0.9

Comparison = namedtuple('Comparison', ['lhs', 'rhs', 'outer'])


def integrate(grid, integrand, radius=1.0):
    """Mean of integrand over the grid nodes (scaled by ``radius``)."""
    points = grid.nodes(radius)
    values = np.asarray(integrand(points))
    finite = np.isfinite(values)
    if not finite.all():
        node = points[np.argmin(finite)]
        raise ValidationError(
            f'Integrand is not finite at node {np.round(node, 12).tolist()}.', code='non_finite',
        )
    total = values.mean()
    return float(total) if np.isrealobj(total) else complex(total)


def _check_grid(data, grid):
    if grid.dimension != data.dimension:
        raise ValidationError(
            f'Grid of dimension {grid.dimension} for data of dimension {data.dimension}.', code='dimension_mismatch',
        )


def _warn_if_near_singular(data):
    if data.max_modulus() > NEAR_SINGULAR_MODULUS:
        logger.warning(
            'max |r_j| = %.4f exceeds %.2f; the log integrand is near-singular, refine the grid',
            data.max_modulus(), NEAR_SINGULAR_MODULUS,
        )


def szego_reference(data, level=None):
    """sum_{j<=level} log(1 - |r_j|^2)."""
    level = data.m if level is None else level
    return sum(math.log(float(1 - abs(r) ** 2)) for r in data.r[1:level + 1])


def szego_integral(data, grid):
    """Integral of log(1 - |f_m|^2) over T^d."""
    _check_grid(data, grid)
    _warn_if_near_singular(data)
    return integrate(grid, lambda z: np.log(1 - np.abs(eval_convergent(data, data.m, z)) ** 2))


def outer_integral(data, grid):
    """Integral of log|1 - f_m|, which vanishes since 1 - f_m is outer."""
    _check_grid(data, grid)
    return integrate(grid, lambda z: np.log(np.abs(1 - eval_convergent(data, data.m, z))))


def szego_log_w(data, grid, outer_tolerance=1e-8):
    """
    Integral of log Re((1 + f_m) / (1 - f_m)). The outer-function integral is
    checked on the way and a warning is logged when it misses ``outer_tolerance``.
    """
    _check_grid(data, grid)
    _warn_if_near_singular(data)
    outer = outer_integral(data, grid)
    if abs(outer) > outer_tolerance:
        logger.warning('Integral of log|1 - f| is %.3e, expected 0', outer)

    def log_density(z):
        f = eval_convergent(data, data.m, z)
        return np.log(((1 + f) / (1 - f)).real)

    return integrate(grid, log_density)


def log_density_integral(h, grid):
    """Integral of log Re((1 + h) / (1 - h)) for a polynomial h with h(0) = 0."""
    if h.constant_term != 0:
        raise ValidationError({'h': 'h(0) must be 0.'}, code='nonzero_constant_term')
    if h.dimension != grid.dimension:
        raise ValidationError('Grid and polynomial dimensions differ.', code='dimension_mismatch')

    def log_density(z):
        values = h.evaluate(z)
        return np.log(((1 + values) / (1 - values)).real)

    return integrate(grid, log_density)


def measure_mass(data, grid, level=None):
    """Total mass of mu_{f_n}; 1 for a probability measure."""
    density = MeasureWeight(data, data.m if level is None else level).density
    return integrate(grid, density)


def gram(data, grid, jmax):
    """G[j][k] = integral of Phi_j conj(Phi_k) d mu_{f_m}, 0 <= j, k <= jmax."""
    _check_grid(data, grid)
    if not 0 <= jmax <= data.m:
        raise ValidationError({'jmax': f'jmax {jmax} outside 0..{data.m}.'}, code='bad_level')
    points = grid.nodes()
    density = MeasureWeight(data, data.m).density(points)
    quads = build_quads(data)
    values = np.array([np.asarray(quads[j].phi.evaluate(points)) for j in range(jmax + 1)])
    return (values * density) @ values.conj().T / grid.size


def gram_reference(data, jmax):
    """Diagonal prod_{s<=j} (1 - |r_s|^2), zero elsewhere."""
    return np.diag([float(data.level_product(j)) for j in range(jmax + 1)]).astype(complex)


def enumerate_zeta_monomials(data, j):
    """Exponent vectors of z_{nu_s1} ... z_{nu_sk} over nonempty subsets of steps 1..j."""
    found = set()
    steps = range(1, j + 1)
    for size in range(1, j + 1):
        for subset in itertools.combinations(steps, size):
            exponents = [0] * data.dimension
            for step in subset:
                exponents[data.variable(step)] += 1
            found.add(tuple(exponents))
    return sorted(found)


def star_orthogonality(data, grid, j):
    """Largest |integral of Phi*_j conj(p) d mu_{f_m}| over the monomials p of Z_j."""
    _check_grid(data, grid)
    if not 1 <= j <= data.m:
        raise ValidationError({'j': f'Level {j} outside 1..{data.m}.'}, code='bad_level')
    points = grid.nodes()
    weighted = np.asarray(build_quads(data)[j].phi_star.evaluate(points)) * MeasureWeight(data, data.m).density(points)
    exponents = np.array(enumerate_zeta_monomials(data, j))
    monomials = np.prod(points[np.newaxis, :, :] ** exponents[:, np.newaxis, :], axis=-1)
    return float(np.max(np.abs(monomials.conj() @ weighted / grid.size)))


def star_mean(data, grid, j):
    """Integral of Phi*_j d mu_{f_m}; equals prod_{s<=j} (1 - |r_s|^2)."""
    _check_grid(data, grid)
    phi_star = quad_at(data, j).phi_star
    density = MeasureWeight(data, data.m).density
    return integrate(grid, lambda z: np.asarray(phi_star.evaluate(z)) * density(z))


def poisson_kernel(z, points):
    """prod_j (1 - |z_j|^2) / |zeta_j - z_j|^2 at torus points zeta."""
    z = np.asarray(z, dtype=complex)
    return np.prod((1 - np.abs(z) ** 2) / np.abs(points - z) ** 2, axis=-1)


def poisson_check(data, grid, z):
    """
    (Re((1 + f_m(z)) / (1 - f_m(z))), integral of K_z d mu_{f_m}) for an
    interior point with every |z_j| <= 0.9.
    """
    _check_grid(data, grid)
    z = np.asarray(z, dtype=complex)
    if z.shape != (data.dimension,) or np.any(np.abs(z) > POISSON_RADIUS):
        raise ValidationError(
            {'z': f'Need {data.dimension} coordinates of modulus at most {POISSON_RADIUS}.'}, code='bad_point',
        )
    f = eval_convergent(data, data.m, z)
    lhs = ((1 + f) / (1 - f)).real
    density = MeasureWeight(data, data.m).density
    rhs = integrate(grid, lambda points: poisson_kernel(z, points) * density(points))
    return lhs, rhs


def radial_lambda(data, grid, eps):
    """-integral of log(1 - |f_m(eps z)|^2) over T^d, for 0 <= eps <= 1."""
    _check_grid(data, grid)
    if not 0 <= eps <= 1:
        raise ValidationError({'eps': 'eps must lie in [0, 1].'}, code='bad_radius')
    return -integrate(grid, lambda z: np.log(1 - np.abs(eval_convergent(data, data.m, z)) ** 2), radius=eps)


def is_strictly_increasing(values):
    return all(later > earlier for earlier, later in zip(values, values[1:]))


def comparison_check(data, grid, n):
    """
    Both sides of
        integral log(1 - |f|^2) = log prod_{j<=n} (1 - |r_j|^2) + integral log(1 - |k_n|^2),
    and the integral of log|1 + B_n k_n|, which is 0.
    """
    _check_grid(data, grid)
    if not 0 <= n <= data.m:
        raise ValidationError({'n': f'Level {n} outside 0..{data.m}.'}, code='bad_level')

    def tail(z):
        if n == data.m:
            return np.zeros(z.shape[:-1], dtype=complex)
        return eval_tail(data, n, z)

    lhs = szego_integral(data, grid)
    rhs = szego_reference(data, n) + integrate(grid, lambda z: np.log(1 - np.abs(tail(z)) ** 2))
    outer = integrate(grid, lambda z: np.log(np.abs(1 + eval_b(data, n, z) * tail(z))))
    return Comparison(lhs, rhs, outer)


# Torus lines

def nyquist_step(line, top_level):
    """2 pi / (20 Omega) with Omega = (sum eta_j) * m bounding the frequency content."""
    bandwidth = sum(line.eta) * max(top_level, 1)
    return 2 * math.pi / (20 * bandwidth)


def line_average(line, g, L, step):
    """Composite trapezoid approximation of (1 / 2L) integral_{-L}^{L} g(l_eta(omega)) d omega."""
    if L <= 0 or step <= 0:
        raise ValidationError('L and step must be positive.', code='bad_interval')
    intervals = max(1, math.ceil(2 * L / step))
    omega = np.linspace(-L, L, intervals + 1)
    values = np.asarray(g(line.at(omega)))
    if not np.all(np.isfinite(values)):
        raise ValidationError('Integrand is not finite along the line.', code='non_finite')
    return float(np.trapezoid(values, omega).real / (2 * L))


def line_average_schedule(line, g, schedule, step):
    """Rows (L, average) over the L values of ``schedule``."""
    rows = []
    for L in schedule:
        average = line_average(line, g, L, step)
        rows.append((L, average))
        logger.debug('Line average at L=%g: %.12g', L, average)
    return rows


def line_szego(data, line, schedule, step=None):
    """
    Averages of -log(1 - |f_m|^2) along the line with the Szego reference.
    Returns rows (L, average, reference, abs_error); a warning is logged
    whenever the error grows from one L to the next.
    """
    if line.dimension != data.dimension:
        raise ValidationError({'eta': 'One frequency per variable is required.'}, code='dimension_mismatch')
    step = nyquist_step(line, data.m) if step is None else step
    reference = -szego_reference(data)

    def integrand(z):
        return -np.log(1 - np.abs(eval_convergent(data, data.m, z)) ** 2)

    rows = []
    for L, average in line_average_schedule(line, integrand, schedule, step):
        error = abs(average - reference)
        if rows and error > rows[-1][3]:
            logger.warning('Line-average error grew from %.3e to %.3e at L=%g', rows[-1][3], error, L)
        rows.append((L, average, reference, error))
    return rows


def error_settles(rows, doublings=2):
    """True when abs_error does not grow over the last ``doublings`` steps of the schedule."""
    errors = [row[3] for row in rows][-(doublings + 1):]
    return all(later <= earlier for earlier, later in zip(errors, errors[1:]))


def almost_periodic_spectrum(data, line, max_degree):
    """
    Pairs (lambda, c) with f_m(l_eta(omega)) ~ sum c e^{i lambda omega}: each
    multi-index alpha contributes c_alpha(r) at frequency sum_j alpha_j eta_{nu_j}.
    Equal frequencies are merged; pairs are sorted by frequency.
    """
    if line.dimension != data.dimension:
        raise ValidationError({'eta': 'One frequency per variable is required.'}, code='dimension_mismatch')
    r = [complex(value) for value in data.r]
    merged = {}
    for alpha in enumerate_indices(data.m, max_degree):
        c = weight(alpha, r)
        if c == 0:
            continue
        frequency = sum(alpha[j] * line.eta[data.variable(j)] for j in range(1, alpha.length + 1))
        key = round(frequency, 12)
        merged[key] = merged.get(key, 0) + c
    return sorted(merged.items())


def evaluate_spectrum(spectrum, omega):
    omega = np.asarray(omega, dtype=float)
    return sum(c * np.exp(1j * frequency * omega) for frequency, c in spectrum)


__all__ = [
    'Comparison', 'integrate', 'szego_reference', 'szego_integral', 'outer_integral',
    'szego_log_w', 'log_density_integral', 'measure_mass', 'gram', 'gram_reference',
    'enumerate_zeta_monomials', 'star_orthogonality', 'star_mean', 'poisson_kernel', 'poisson_check',
    'radial_lambda', 'is_strictly_increasing', 'comparison_check', 'nyquist_step', 'line_average',
    'line_average_schedule', 'line_szego', 'error_settles', 'almost_periodic_spectrum', 'evaluate_spectrum',
]
