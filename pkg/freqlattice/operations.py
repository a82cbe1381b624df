"""
Constructive integer lattice for torus-line frequencies.

Given eta = B b with B rational and b positive, find a non-negative integer
matrix A and a positive vector q with eta = A q. For a rational approximant
q_j of b let P_j be the orthogonal projection onto q_j, Q = I + t P_j and
Q^-1 = I - t/(1 + t) P_j. Whenever B Q >= 0 and Q^-1 b > 0, clearing the
denominators of B Q with an integer s gives A = s B Q and q = s^-1 Q^-1 b.
"""
import itertools
import logging

import numpy as np
import sympy
from sympy import ImmutableMatrix, Rational, eye
from sympy.ntheory.continued_fraction import continued_fraction_convergents, continued_fraction_iterator

from torus_schur.exceptions import LatticeSearchError

from .models import LatticeDecomposition

logger = logging.getLogger(__name__)

APPROXIMANT_COUNT = 12
MAX_DOUBLINGS = 20


def _convergents(value, count):
    exact = Rational(value) if value.is_rational else Rational(float(value))
    found = list(itertools.islice(continued_fraction_convergents(continued_fraction_iterator(exact)), count))
    return found + [found[-1]] * (count - len(found))


def rational_approximants(b, count=APPROXIMANT_COUNT):
    """
    Vectors of continued-fraction convergents of the entries of b (of their
    floating images when irrational); vectors with a non-positive entry are skipped.
    """
    columns = [_convergents(sympy.sympify(value), count) for value in b]
    approximants = []
    for j in range(count):
        vector = tuple(column[j] for column in columns)
        if all(entry > 0 for entry in vector):
            approximants.append(vector)
    return approximants


def _t_candidates():
    for k in range(MAX_DOUBLINGS + 1):
        yield Rational(2) ** k


def _projection(vector):
    column = ImmutableMatrix(vector)
    return column * column.T / (column.T * column)[0]


def _accept(data, scaled, inverse_b, certificate):
    s = sympy.ilcm(1, *(Rational(entry).q for entry in scaled))
    decomposition = LatticeDecomposition(
        A=scaled * s,
        q=[sympy.expand(value / s) for value in inverse_b],
        certificate={**certificate, 's': int(s)},
    )
    if not verify(decomposition, data):
        raise LatticeSearchError(
            f'Reconstruction failed for {certificate}.', best_j=certificate['j'], best_t=certificate['t'],
        )
    return decomposition


def decompose(data, count=APPROXIMANT_COUNT):
    """
    A non-negative B is used as it stands (t = 0). Otherwise t runs through
    1, 2, 4, ... and, for each t, the approximants j = 0, 1, ...; the first
    (j, t) with B Q >= 0 and Q^-1 b > 0 is accepted.
    """
    B, b = data.B, data.b_vector
    if all(entry >= 0 for entry in B):
        return _accept(data, B, list(data.b), {'j': None, 't': '0', 'approximant': None})
    size = B.cols
    approximants = rational_approximants(data.b, count)
    best = (None, None)
    for t in _t_candidates():
        for j, approximant in enumerate(approximants):
            projection = _projection(approximant)
            scaled = ImmutableMatrix(B * (eye(size) + t * projection))
            if any(entry < 0 for entry in scaled):
                logger.debug('t=%s j=%d: B Q has a negative entry', t, j)
                continue
            best = (j, str(t))
            inverse_b = [sympy.expand(value) for value in (eye(size) - t / (1 + t) * projection) * b]
            if any(value.is_positive is not True for value in inverse_b):
                logger.debug('t=%s j=%d: Q^-1 b is not positive', t, j)
                continue
            logger.debug('Accepted t=%s j=%d', t, j)
            certificate = {'j': j, 't': str(t), 'approximant': [str(x) for x in approximant]}
            return _accept(data, scaled, inverse_b, certificate)
    raise LatticeSearchError(
        f'No positive decomposition within {len(approximants)} approximants and t <= 2^{MAX_DOUBLINGS}.',
        best_j=best[0], best_t=best[1],
    )


def verify(decomposition, data):
    """True iff eta = A q exactly, A is a non-negative integer matrix and q > 0."""
    A, q = decomposition.A, decomposition.q
    if A.shape != data.B.shape or len(q) != data.B.cols:
        return False
    if any(not (entry.is_integer and entry >= 0) for entry in A):
        return False
    if any(value.is_positive is not True for value in q):
        return False
    residual = A * decomposition.q_vector - ImmutableMatrix(data.eta)
    return all(sympy.simplify(sympy.expand(entry)) == 0 for entry in residual)


def line_factorization_error(decomposition, data, omegas):
    """
    Largest |e^{i eta_nu omega} - prod_lambda (e^{i q_lambda omega})^{A_{nu lambda}}|
    over the sample frequencies.
    """
    omegas = np.asarray(omegas, dtype=float)
    eta = np.array([float(value) for value in data.eta])
    q = np.array(decomposition.q_float())
    A = np.array(decomposition.A.tolist(), dtype=int)
    direct = np.exp(1j * omegas[:, np.newaxis] * eta)
    base = np.exp(1j * omegas[:, np.newaxis] * q)
    factored = np.prod(base[:, np.newaxis, :] ** A[np.newaxis, :, :], axis=-1)
    return float(np.max(np.abs(direct - factored)))
