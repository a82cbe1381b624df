"""
Schur function engine.

From SchurData (r, nu) this module builds the entries of P_n = M_0 M_1 ... M_n,
with M_0 = [[1, 1], [-1, 1]] and M_j = [[z_{nu_j}, r_j z_{nu_j}], [conj(r_j), 1]],
and evaluates everything derived from them: the convergents
f_n = (Psi*_n - Phi*_n) / (Psi*_n + Phi*_n), the tails k_n, the transmission
g_n and the Taylor coefficients. Points are arrays of shape (d,) or (..., d);
scalars come back for single points and arrays for batches.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from django.core.exceptions import ValidationError
from numpy.polynomial import polynomial as npoly

from polycore.models import TorusPoly
from polycore.operations import diagonal_restriction, series_quotient
from scattering.operations import enumerate_indices, weight
from torus_schur.exceptions import ConditioningError, DivisibilityError, SchurParameterError

from .models import PolyQuad, SchurData

logger = logging.getLogger(__name__)

DENOMINATOR_GUARD = 1e-14
DIVISIBILITY_TOLERANCE = 1e-12
BOUNDARY_TOLERANCE = 1e-12
MAX_SCHUR_STEPS = 64


# Polynomial families

def build_quads(data):
    """PolyQuads of levels 0..m, from P_{n+1} = P_n M_{n+1}."""
    return _build_quads(data, data.is_exact())


# Fraction(1, 2) == 0.5 with equal hashes, so exactness is part of the key
@lru_cache(maxsize=64)
def _build_quads(data, exact):
    d = data.dimension
    one = TorusPoly.constant(d, 1)
    quads = [PolyQuad(0, one, one, one, one)]
    for j in range(1, data.m + 1):
        previous = quads[-1]
        r = data.r[j]
        r_bar = r.conjugate()
        z = TorusPoly.variable(d, data.variable(j))
        quads.append(PolyQuad(
            level=j,
            psi=z * previous.psi + r_bar * previous.psi_star,
            psi_star=(r * z) * previous.psi + previous.psi_star,
            phi=z * previous.phi - r_bar * previous.phi_star,
            phi_star=previous.phi_star - (r * z) * previous.phi,
        ))
        logger.debug('Built level %d: %d terms in Phi*', j, len(quads[-1].phi_star))
    return tuple(quads)


def quad_at(data, n):
    _check_level(data, n)
    return build_quads(data)[n]


def _check_level(data, n, upper=None):
    upper = data.m if upper is None else upper
    if not 0 <= n <= upper:
        raise ValidationError({'n': f'Level {n} outside 0..{upper}.'}, code='bad_level')


# Evaluation

def _points(data, z):
    points = np.asarray(z, dtype=complex)
    if points.ndim == 0 or points.shape[-1] != data.dimension:
        raise ValidationError(
            f'Expected points with {data.dimension} coordinates, got shape {points.shape}.',
            code='dimension_mismatch',
        )
    if np.any(np.abs(points) > 1 + BOUNDARY_TOLERANCE):
        raise ValidationError('Points must lie in the closed unit polydisk.', code='outside_polydisk')
    return points


def _unwrap(values, points):
    if points.ndim == 1:
        return complex(values)
    return values


def _guard(denominator, what):
    smallest = float(np.min(np.abs(denominator)))
    if smallest < DENOMINATOR_GUARD:
        raise ConditioningError(f'{what} denominator fell to {smallest:.3e}.')


def _mobius_chain(data, first, last, points):
    """Action of M_first ... M_last on (0, 1): h <- z_nu (h + r) / (1 + conj(r) h), from j = last down."""
    h = np.zeros(points.shape[:-1], dtype=complex)
    for j in range(last, first - 1, -1):
        r = complex(data.r[j])
        denominator = 1 + r.conjugate() * h
        _guard(denominator, f'Step {j}')
        h = points[..., data.variable(j)] * (h + r) / denominator
    return h


def eval_convergent(data, n, z):
    """f_n(z) = (Psi*_n - Phi*_n) / (Psi*_n + Phi*_n)."""
    _check_level(data, n)
    points = _points(data, z)
    quad = quad_at(data, n)
    psi_star = np.asarray(quad.psi_star.evaluate(points))
    phi_star = np.asarray(quad.phi_star.evaluate(points))
    denominator = psi_star + phi_star
    _guard(denominator, f'f_{n}')
    return _unwrap((psi_star - phi_star) / denominator, points)


def eval_direct(data, n, z):
    """f_n(z) by nested Moebius maps, without the polynomial families."""
    _check_level(data, n)
    points = _points(data, z)
    return _unwrap(_mobius_chain(data, 1, n, points), points)


def eval_tail(data, n, z):
    """Tail k_n(z), the action of M_{n+1} ... M_m on (0, 1)."""
    _check_level(data, n, upper=data.m - 1)
    points = _points(data, z)
    return _unwrap(_mobius_chain(data, n + 1, data.m, points), points)


def eval_recombined(data, n, z):
    """
    f_m(z) = ((Psi_n + Phi_n) k_n + Psi*_n - Phi*_n) / ((Psi_n - Phi_n) k_n + Psi*_n + Phi*_n).
    """
    _check_level(data, n)
    points = _points(data, z)
    quad = quad_at(data, n)
    tail = _mobius_chain(data, n + 1, data.m, points)
    psi, phi = np.asarray(quad.psi.evaluate(points)), np.asarray(quad.phi.evaluate(points))
    psi_star, phi_star = np.asarray(quad.psi_star.evaluate(points)), np.asarray(quad.phi_star.evaluate(points))
    denominator = (psi - phi) * tail + psi_star + phi_star
    _guard(denominator, 'Recombined')
    return _unwrap(((psi + phi) * tail + psi_star - phi_star) / denominator, points)


def eval_b(data, n, z):
    """B_n(z) = (Psi_n - Phi_n) / (Psi*_n + Phi*_n)."""
    _check_level(data, n)
    points = _points(data, z)
    quad = quad_at(data, n)
    denominator = np.asarray(quad.denominator.evaluate(points))
    _guard(denominator, f'B_{n}')
    return _unwrap(np.asarray((quad.psi - quad.phi).evaluate(points)) / denominator, points)


def eval_g(data, n, z):
    """g_n(z) = 2 prod_{j<=n} sqrt(1 - |r_j|^2) / (Psi*_n + Phi*_n)."""
    _check_level(data, n)
    points = _points(data, z)
    quad = quad_at(data, n)
    denominator = np.asarray(quad.denominator.evaluate(points))
    _guard(denominator, f'g_{n}')
    scale = 2 * math.prod(math.sqrt(float(1 - abs(r) ** 2)) for r in data.r[1:n + 1])
    return _unwrap(scale / denominator, points)


# Taylor coefficients

def taylor_from_weights(data, max_degree):
    """
    Taylor polynomial of f up to total degree ``max_degree`` as
    sum_alpha c_alpha(r) (z o nu)^alpha; weights landing on one monomial add.
    """
    if max_degree < 0:
        raise ValidationError({'max_degree': 'Degree must be non-negative.'}, code='negative_degree')
    r = [complex(value) for value in data.r]
    terms = []
    for alpha in enumerate_indices(data.m, max_degree):
        coefficient = weight(alpha, r)
        if coefficient == 0:
            continue
        exponents = [0] * data.dimension
        for j in range(1, alpha.length + 1):
            exponents[data.variable(j)] += alpha[j]
        terms.append((exponents, coefficient))
    return TorusPoly(data.dimension, terms)


def taylor_from_rational(quad, max_degree):
    """Power series of (Psi*_n - Phi*_n) / (Psi*_n + Phi*_n) to total degree ``max_degree``."""
    return series_quotient(quad.numerator, quad.denominator, max_degree)


# Univariate inverse continued fraction

def univariate_rational(data):
    """Ascending numerator and denominator coefficients of f_m for d = 1."""
    if data.dimension != 1:
        raise ValidationError({'dimension': 'Only defined for one variable.'}, code='bad_dimension')
    quad = quad_at(data, data.m)
    numerator = np.array([complex(c) for c in diagonal_restriction(quad.numerator)])
    denominator = np.array([complex(c) for c in diagonal_restriction(quad.denominator)])
    return numerator, denominator


def _pad(a, b):
    size = max(len(a), len(b))
    return np.pad(a, (0, size - len(a))), np.pad(b, (0, size - len(b)))


def schur_algorithm_1d(numerator, denominator, max_steps=MAX_SCHUR_STEPS):
    """
    Schur parameters (r_0, r_1, ...) of h = numerator / denominator.

    Each step sets r_n = h_n(0) and h_{n+1} = (h_n - r_n) / (z (1 - conj(r_n) h_n)),
    i.e. N <- (N - r_n D) / z and D <- D - conj(r_n) N, both then divided by D(0) = 1 - |r_n|^2.
    Stops after h_n == 0 (which contributes a final 0) or after ``max_steps`` parameters.
    """
    numerator = np.atleast_1d(np.asarray(numerator, dtype=complex))
    denominator = np.atleast_1d(np.asarray(denominator, dtype=complex))
    if denominator[0] == 0:
        raise ValidationError({'denominator': 'Denominator vanishes at 0.'}, code='denominator_vanishes_at_zero')
    numerator, denominator = _pad(numerator / denominator[0], denominator / denominator[0])
    scale = max(1.0, float(np.max(np.abs(numerator))), float(np.max(np.abs(denominator))))
    parameters = []
    while len(parameters) < max_steps:
        if np.all(np.abs(numerator) <= DIVISIBILITY_TOLERANCE):
            parameters.append(0j)
            break
        index = len(parameters)
        r = complex(numerator[0])
        if abs(r) >= 1 - BOUNDARY_TOLERANCE:
            raise SchurParameterError(index, r)
        parameters.append(r)
        shifted = npoly.polysub(numerator, r * denominator)
        if abs(shifted[0]) > DIVISIBILITY_TOLERANCE * scale:
            raise DivisibilityError(f'Step {index}: residual {abs(shifted[0]):.3e} at z = 0.')
        denominator = npoly.polysub(denominator, r.conjugate() * numerator)
        numerator, denominator = _pad(shifted[1:] / denominator[0], denominator / denominator[0])
    else:
        logger.info('Schur algorithm stopped after %d steps', max_steps)
    return parameters


# Structural identities, as max coefficient distances

def determinant_residual(data, n):
    """Psi_n Phi*_n + Phi_n Psi*_n against 2 z_{nu_1}...z_{nu_n} prod (1 - |r_j|^2)."""
    quad = quad_at(data, n)
    left = quad.psi * quad.phi_star + quad.phi * quad.psi_star
    right = TorusPoly.monomial(data.dimension, data.multidegree(n), 2 * data.level_product(n))
    return left.distance(right)


def star_residuals(data, n):
    """(|star(Phi_n) - Phi*_n|, |star(Psi_n) - Psi*_n|) for the multidegree of z_{nu_1}...z_{nu_n}."""
    quad = quad_at(data, n)
    bound = data.multidegree(n)
    return quad.phi.star(bound).distance(quad.phi_star), quad.psi.star(bound).distance(quad.psi_star)


def downward_residual(data, n):
    """(1 - |r_{n+1}|^2) Phi*_n against Phi*_{n+1} + r_{n+1} Phi_{n+1}."""
    _check_level(data, n, upper=data.m - 1)
    current, following = quad_at(data, n), quad_at(data, n + 1)
    r = data.r[n + 1]
    return current.phi_star.scale(1 - abs(r) ** 2).distance(following.phi_star + r * following.phi)


def upward_residual(data, n):
    """Psi*_{n+1} + Phi*_{n+1} against r_{n+1} z_{nu_{n+1}} (Psi_n - Phi_n) + Psi*_n + Phi*_n."""
    _check_level(data, n, upper=data.m - 1)
    current, following = quad_at(data, n), quad_at(data, n + 1)
    z = TorusPoly.variable(data.dimension, data.variable(n + 1))
    expected = (data.r[n + 1] * z) * (current.psi - current.phi) + current.denominator
    return following.denominator.distance(expected)


def sign_flip_residual(data, n):
    """Negating r swaps Phi_n with Psi_n and Phi*_n with Psi*_n."""
    quad, flipped = quad_at(data, n), quad_at(data.negated(), n)
    return max(
        flipped.phi.distance(quad.psi),
        flipped.psi.distance(quad.phi),
        flipped.phi_star.distance(quad.psi_star),
        flipped.psi_star.distance(quad.phi_star),
    )


# Pointwise identities on the torus, as max relative errors

def real_part_residual(data, n, z):
    """Re((1 + f_n) / (1 - f_n)) against prod (1 - |r_j|^2) / |Phi*_n|^2 on T^d."""
    points = _points(data, z)
    f = np.asarray(eval_convergent(data, n, points))
    phi_star = np.asarray(quad_at(data, n).phi_star.evaluate(points))
    expected = float(data.level_product(n)) / np.abs(phi_star) ** 2
    return float(np.max(np.abs(((1 + f) / (1 - f)).real - expected) / expected))


def transmission_residual(data, n, z):
    """1 - |f_n|^2 against |g_n|^2 on T^d."""
    points = _points(data, z)
    f = np.asarray(eval_convergent(data, n, points))
    g = np.asarray(eval_g(data, n, points))
    return float(np.max(np.abs(1 - np.abs(f) ** 2 - np.abs(g) ** 2)))


def tail_identity_residual(data, n, z):
    """
    (1 - |f|^2) |1 + B_n k_n|^2 against (1 - |f_n|^2)(1 - |k_n|^2) on T^d,
    together with ||B_n| - |f_n||. Returns the larger relative error.
    """
    points = _points(data, z)
    f = np.asarray(eval_convergent(data, data.m, points))
    f_n = np.asarray(eval_convergent(data, n, points))
    b = np.asarray(eval_b(data, n, points))
    k = np.asarray(eval_tail(data, n, points)) if n < data.m else np.zeros_like(f)
    left = (1 - np.abs(f) ** 2) * np.abs(1 + b * k) ** 2
    right = (1 - np.abs(f_n) ** 2) * (1 - np.abs(k) ** 2)
    identity = np.max(np.abs(left - right) / np.abs(right))
    modulus = np.max(np.abs(np.abs(b) - np.abs(f_n)))
    return float(max(identity, modulus))


def zero_free_margin(data, grid_points=32, samples=1000, rng=None):
    """
    Smallest |Phi*_n| and |Psi*_n + Phi*_n| over all levels, sampled on the
    grid_points^d torus grid and at random points of the open polydisk.
    """
    rng = np.random.default_rng() if rng is None else rng
    axis = 2 * np.pi * np.arange(grid_points) / grid_points
    angles = np.stack(np.meshgrid(*([axis] * data.dimension), indexing='ij'), axis=-1)
    torus = np.exp(1j * angles).reshape(-1, data.dimension)
    radius = np.sqrt(rng.uniform(0, 1, size=(samples, data.dimension)))
    interior = radius * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(samples, data.dimension)))
    points = np.concatenate([torus, interior])
    smallest_phi_star = smallest_sum = np.inf
    for quad in build_quads(data):
        smallest_phi_star = min(smallest_phi_star, float(np.min(np.abs(quad.phi_star.evaluate(points)))))
        smallest_sum = min(smallest_sum, float(np.min(np.abs(quad.denominator.evaluate(points)))))
    return smallest_phi_star, smallest_sum


# Monomial substitution

def substitute(data, sub):
    """
    Data in dimension D whose convergents are f_n(z^kappa): step j becomes
    |kappa(nu_j)| steps with parameters (0, ..., 0, r_j) along the block of kappa(nu_j).
    """
    if sub.source_dimension != data.dimension:
        raise ValidationError(
            {'kappa': f'Substitution has {sub.source_dimension} rows for dimension {data.dimension}.'},
            code='dimension_mismatch',
        )
    r, nu = [0], []
    for j in range(1, data.m + 1):
        block = sub.block(data.nu[j - 1])
        r.extend([0] * (len(block) - 1) + [data.r[j]])
        nu.extend(block)
    return SchurData(sub.target_dimension, r, nu)


def substituted_level(sub, data, j):
    """Level n_j = |kappa(nu_1)| + ... + |kappa(nu_j)| of the substituted data."""
    return sum(len(sub.block(variable)) for variable in data.nu[:j])


def apply_substitution(sub, z):
    """z^kappa for points of shape (D,) or (..., D)."""
    points = np.asarray(z, dtype=complex)
    exponents = np.array(sub.kappa)
    return np.prod(points[..., np.newaxis, :] ** exponents, axis=-1)


__all__ = [
    'build_quads', 'quad_at', 'eval_convergent', 'eval_direct', 'eval_tail',
    'eval_recombined', 'eval_b', 'eval_g', 'taylor_from_weights', 'taylor_from_rational',
    'univariate_rational', 'schur_algorithm_1d', 'determinant_residual', 'star_residuals',
    'downward_residual', 'upward_residual', 'sign_flip_residual', 'real_part_residual',
    'transmission_residual', 'tail_identity_residual', 'zero_free_margin', 'substitute',
    'substituted_level', 'apply_substitution', 'diagonal_restriction',
]
