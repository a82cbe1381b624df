"""Polynomial operations in functional form."""
import numbers
from fractions import Fraction

from .models import HermitianPoly, Monomial, TorusPoly


def poly_add(p, q):
    """Coefficient-wise sum of two polynomials of the same dimension."""
    return p + q


def poly_mul(p, q):
    """Product of two polynomials of the same dimension."""
    return p * q


def poly_eval(p, z):
    """Value of ``p`` at a point or a batch of points (shape (..., d))."""
    return p.evaluate(z)


def poly_star(p, multidegree):
    """Conjugate-reciprocal of ``p`` with respect to the monomial z^multidegree."""
    return p.star(multidegree)


def hpoly_dbar_d(p):
    """Exact mixed derivative d^2/(dzbar dz) of a (z, zbar) polynomial."""
    return p.dbar_d()


def laplace_beltrami(p):
    """Scattering-disk Laplacian -(1 - z*zbar) d^2/(dzbar dz)."""
    return p.laplace_beltrami()


def series_quotient(numerator, denominator, max_degree):
    """
    Power series of numerator / denominator truncated at total degree.

    The denominator needs a nonzero constant term. The quotient is computed
    degree by degree: Q_k = (N_k - sum_{i>=1} D_i Q_{k-i}) / D_0, where X_k
    is the homogeneous part of degree k.
    """
    dimension = numerator.dimension
    leading = denominator.constant_term
    if leading == 0:
        raise ZeroDivisionError('Denominator has zero constant term.')
    inverse = Fraction(1) / leading if isinstance(leading, numbers.Rational) else 1 / leading
    numerator_parts = [numerator.homogeneous_part(k) for k in range(max_degree + 1)]
    denominator_parts = [denominator.homogeneous_part(k) for k in range(max_degree + 1)]
    quotient_parts = []
    for k in range(max_degree + 1):
        remainder = numerator_parts[k]
        for i in range(1, k + 1):
            if denominator_parts[i].is_zero() or quotient_parts[k - i].is_zero():
                continue
            remainder = remainder - denominator_parts[i] * quotient_parts[k - i]
        quotient_parts.append(remainder.scale(inverse))
    total = TorusPoly.zero(dimension)
    for part in quotient_parts:
        total = total + part
    return total


def diagonal_restriction(p):
    """Ascending coefficients of the univariate polynomial p(z, ..., z)."""
    coefficients = [0] * (max(p.degree, 0) + 1)
    for monomial, coefficient in p.items():
        coefficients[monomial.degree] += coefficient
    return coefficients


__all__ = [
    'HermitianPoly', 'Monomial', 'TorusPoly',
    'poly_add', 'poly_mul', 'poly_eval', 'poly_star', 'hpoly_dbar_d', 'laplace_beltrami',
    'series_quotient', 'diagonal_restriction',
]
