"""
Scattering polynomials, their eigenvalue identity and the scattering weights.

All polynomial work here is exact integer arithmetic on HermitianPoly; only
phi_eval and weight leave the integers, by evaluating at complex points.
"""
import logging
from functools import lru_cache
from math import factorial

from django.core.exceptions import ValidationError

from polycore.models import HermitianPoly
from torus_schur.exceptions import DivisibilityError

from .models import MultiIndex, ScatteringIndex

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _pascal_row(n):
    if n == 0:
        return (1,)
    previous = _pascal_row(n - 1)
    return (1,) + tuple(previous[i] + previous[i + 1] for i in range(n - 1)) + (1,)


def binomial(n, k):
    """Exact C(n, k) from Pascal's triangle; zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return _pascal_row(n)[k]


@lru_cache(maxsize=None)
def phi(p, q):
    """
    Scattering polynomial phi^(p,q) by the explicit sum

        sum_{j=1}^{min(p,q)} C(p,j) C(q-1,j-1) z^(p-j) (-zbar)^(q-j) (1 - z zbar)^j

    with phi^(p,0) = z^p and phi^(0,q) = 0 for q > 0.
    """
    ScatteringIndex(p, q)
    z, zbar = HermitianPoly.z(), HermitianPoly.zbar()
    if q == 0:
        return z ** p
    if p == 0:
        return HermitianPoly()
    base = HermitianPoly.one_minus_norm()
    total = HermitianPoly()
    for j in range(1, min(p, q) + 1):
        coefficient = binomial(p, j) * binomial(q - 1, j - 1) * (-1) ** (q - j)
        total = total + coefficient * (z ** (p - j)) * (zbar ** (q - j)) * (base ** j)
    return total


def _mixed_partial(poly, z_order, zbar_order):
    """d^(z_order + zbar_order) / dz^z_order dzbar^zbar_order, term by term."""
    terms = []
    for (a, b), c in poly.items():
        if a < z_order or b < zbar_order:
            continue
        falling = factorial(a) // factorial(a - z_order) * factorial(b) // factorial(b - zbar_order)
        terms.append(((a - z_order, b - zbar_order), falling * c))
    return HermitianPoly(terms)


def phi_by_derivative(p, q):
    """
    phi^(p,q) from the Rodrigues-type formula

        (-1)^p / (q (p+q-1)!) (1 - z zbar) d^(p+q)/dzbar^p dz^q (1 - z zbar)^(p+q-1).

    Division by q (p+q-1)! is exact; a remainder raises DivisibilityError.
    For q = 0 the formula is undefined and z^p is returned.
    """
    ScatteringIndex(p, q)
    if q == 0:
        return HermitianPoly.z() ** p
    base = HermitianPoly.one_minus_norm()
    derived = base * _mixed_partial(base ** (p + q - 1), q, p)
    divisor = q * factorial(p + q - 1)
    sign = (-1) ** p
    terms = []
    for key, c in derived.items():
        quotient, remainder = divmod(c, divisor)
        if remainder:
            raise DivisibilityError(f'Coefficient {c} of phi^({p},{q}) is not divisible by {divisor}.')
        terms.append((key, sign * quotient))
    return HermitianPoly(terms)


def phi_eval(p, q, r):
    """Value of phi^(p,q) at z = r, zbar = conj(r), with z^0 = 1 at z = 0."""
    return phi(p, q).evaluate(r)


def weight(alpha, r):
    """
    Scattering weight c_alpha(r) = phi^(1,alpha_1)(r_0) prod_{j=1}^n phi^(alpha_j,alpha_{j+1})(r_j),
    where n = max supp alpha and alpha_{n+1} = 0.
    """
    if not isinstance(alpha, MultiIndex):
        alpha = MultiIndex(tuple(alpha))
    n = alpha.length
    if len(r) < n + 1:
        raise ValidationError(
            {'r': f'Weight of {alpha} needs r_0..r_{n}, got {len(r)} entries.'},
            code='insufficient_parameters',
        )
    for j in range(n + 1):
        if abs(r[j]) >= 1:
            raise ValidationError({'r': f'|r_{j}| = {abs(r[j])} is not below 1.'}, code='parameter_out_of_disk')
    value = phi_eval(1, alpha[1], r[0])
    for j in range(1, n + 1):
        if value == 0:
            break
        value *= phi_eval(alpha[j], alpha[j + 1], r[j])
    return value


def _compositions(length, budget):
    """Vectors of positive integers of the given length with sum <= budget."""
    if budget < length:
        return
    if length == 0:
        yield ()
        return
    for head in range(1, budget - (length - 1) + 1):
        for tail in _compositions(length - 1, budget - head):
            yield (head,) + tail


def enumerate_indices(n, max_total_degree):
    """
    Multi-indices of A_n with |alpha| <= max_total_degree whose weight can be
    nonzero when r_0 = 0: the zero index, and indices with support {1..k}
    and alpha_1 = 1. Sorted lexicographically (zero-padded to length n).
    """
    if n < 0 or max_total_degree < 0:
        raise ValidationError('Level and degree must be non-negative.', code='negative_index')
    found = [MultiIndex.zero()]
    for length in range(1, n + 1):
        for tail in _compositions(length - 1, max_total_degree - 1):
            found.append(MultiIndex((1,) + tail))
    return sorted(found, key=lambda alpha: alpha.entries + (0,) * (n - alpha.length))


def verify_eigen(p, q):
    """True iff -(1 - z zbar) d^2/dzbar dz phi^(p,q) == p q phi^(p,q) exactly."""
    polynomial = phi(p, q)
    return polynomial.laplace_beltrami() == p * q * polynomial


def eigen_table(pmax, qmax):
    """Rows (p, q, ok) for 0 <= p <= pmax, 0 <= q <= qmax."""
    rows = []
    for p in range(pmax + 1):
        for q in range(qmax + 1):
            ok = verify_eigen(p, q)
            if not ok:
                logger.warning('Eigenvalue identity fails for phi^(%s,%s)', p, q)
            rows.append((p, q, ok))
    logger.debug('Checked %d scattering polynomials', len(rows))
    return rows
