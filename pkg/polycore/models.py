"""
Sparse polynomial types.

``TorusPoly`` is a polynomial in d commuting variables z_1..z_d with complex
(or exact) coefficients; ``HermitianPoly`` is a polynomial in the pair
(z, zbar) with exact integer coefficients. Both are immutable and keep their
terms in canonical form: no zero coefficients, exponents in lexicographic
order.
"""

import numbers
from collections.abc import Mapping
from types import MappingProxyType

import numpy as np
from django.core.exceptions import ValidationError


class Monomial(tuple):
    """Exponent vector (e_1, ..., e_d) of the monomial z_1^e_1 ... z_d^e_d."""

    __slots__ = ()

    def __new__(cls, exponents):
        exponents = tuple(exponents)
        for e in exponents:
            if not isinstance(e, numbers.Integral) or isinstance(e, bool):
                raise ValidationError(
                    {'exponents': f'Exponent {e!r} is not an integer.'}, code='bad_exponent'
                )
        monomial = super().__new__(cls, (int(e) for e in exponents))
        monomial.clean()
        return monomial

    def clean(self):
        """Validate dimension and sign of the exponents"""
        if len(self) < 1:
            raise ValidationError(
                {'exponents': 'A monomial needs at least one variable.'}, code='empty_monomial'
            )
        if any(e < 0 for e in self):
            raise ValidationError(
                {'exponents': f'Exponents must be non-negative, got {tuple(self)}.'},
                code='negative_exponent',
            )

    @classmethod
    def zero(cls, dimension):
        return cls((0,) * dimension)

    @classmethod
    def unit(cls, dimension, index):
        """Exponent vector of the single variable z_{index+1} (index is 0-based)."""
        if not 0 <= index < dimension:
            raise ValidationError(
                {'index': f'Variable index {index} outside 0..{dimension - 1}.'}, code='bad_variable'
            )
        return cls(1 if j == index else 0 for j in range(dimension))

    @property
    def dimension(self):
        return len(self)

    @property
    def degree(self):
        return sum(self)

    def times(self, other):
        """Exponent vector of the product of two monomials"""
        _check_dimensions(self.dimension, len(other))
        return Monomial(a + b for a, b in zip(self, other))

    def dominated_by(self, bound):
        return all(a <= b for a, b in zip(self, bound))

    def __repr__(self):
        return f'Monomial({tuple(self)})'


def _check_dimensions(left, right):
    if left != right:
        raise ValidationError(
            f'Dimension mismatch: {left} variables against {right}.', code='dimension_mismatch'
        )


def _is_scalar(value):
    return isinstance(value, numbers.Number) and not isinstance(value, bool)


class TorusPoly:
    """
    Sparse polynomial in d variables.

    Coefficients are complex numbers, or any exact number type with a
    ``conjugate()`` method (int, Fraction). Arithmetic never prunes by epsilon:
    only coefficients that compare equal to zero are dropped.
    """

    __slots__ = ('_dimension', '_terms')

    def __init__(self, dimension, terms=()):
        if not isinstance(dimension, numbers.Integral) or dimension < 1:
            raise ValidationError(
                {'dimension': f'Dimension must be a positive integer, got {dimension!r}.'},
                code='bad_dimension',
            )
        items = terms.items() if isinstance(terms, Mapping) else terms
        accumulated = {}
        for exponents, coefficient in items:
            monomial = Monomial(exponents)
            _check_dimensions(dimension, monomial.dimension)
            accumulated[monomial] = accumulated.get(monomial, 0) + coefficient
        self._dimension = int(dimension)
        self._terms = {
            monomial: accumulated[monomial]
            for monomial in sorted(accumulated)
            if accumulated[monomial] != 0
        }

    # Constructors

    @classmethod
    def zero(cls, dimension):
        return cls(dimension)

    @classmethod
    def constant(cls, dimension, value):
        return cls(dimension, {Monomial.zero(dimension): value})

    @classmethod
    def monomial(cls, dimension, exponents, coefficient=1):
        return cls(dimension, {Monomial(exponents): coefficient})

    @classmethod
    def variable(cls, dimension, index, coefficient=1):
        """The polynomial coefficient * z_{index+1} (index is 0-based)."""
        return cls(dimension, {Monomial.unit(dimension, index): coefficient})

    # Inspection

    @property
    def dimension(self):
        return self._dimension

    @property
    def terms(self):
        """Read-only view of the canonical term map"""
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient(self, exponents):
        return self._terms.get(Monomial(exponents), 0)

    @property
    def constant_term(self):
        return self._terms.get(Monomial.zero(self._dimension), 0)

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=-1)

    def degree_in(self, index):
        return max((m[index] for m in self._terms), default=0)

    @property
    def multidegree(self):
        """Componentwise maximum of the exponents"""
        return Monomial(self.degree_in(j) for j in range(self._dimension))

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, TorusPoly):
            _check_dimensions(self._dimension, other._dimension)
            return other
        if _is_scalar(other):
            return TorusPoly.constant(self._dimension, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TorusPoly(self._dimension, list(self.items()) + list(other.items()))

    __radd__ = __add__

    def __neg__(self):
        return TorusPoly(self._dimension, {m: -c for m, c in self.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        products = []
        for m1, c1 in self.items():
            for m2, c2 in other.items():
                products.append((m1.times(m2), c1 * c2))
        return TorusPoly(self._dimension, products)

    __rmul__ = __mul__

    def scale(self, factor):
        return TorusPoly(self._dimension, {m: factor * c for m, c in self.items()})

    def shift(self, exponents):
        """Multiply by the monomial z^exponents."""
        monomial = Monomial(exponents)
        return TorusPoly(self._dimension, {m.times(monomial): c for m, c in self.items()})

    def conjugate_coefficients(self):
        return TorusPoly(self._dimension, {m: c.conjugate() for m, c in self.items()})

    def homogeneous_part(self, degree):
        return TorusPoly(self._dimension, {m: c for m, c in self.items() if m.degree == degree})

    def truncate(self, max_degree):
        return TorusPoly(self._dimension, {m: c for m, c in self.items() if m.degree <= max_degree})

    def star(self, multidegree):
        """
        Conjugate-reciprocal polynomial z^m * conj(p(1/conj(z))).

        The coefficient at exponent e is the conjugate of the coefficient of
        ``self`` at m - e, so m must dominate every exponent of ``self``.
        """
        bound = Monomial(multidegree)
        _check_dimensions(self._dimension, bound.dimension)
        reflected = {}
        for monomial, coefficient in self.items():
            if not monomial.dominated_by(bound):
                raise ValidationError(
                    {'multidegree': f'{tuple(bound)} does not dominate exponent {tuple(monomial)}.'},
                    code='multidegree_too_small',
                )
            reflected[Monomial(b - e for b, e in zip(bound, monomial))] = coefficient.conjugate()
        return TorusPoly(self._dimension, reflected)

    # Comparison

    def __eq__(self, other):
        if not isinstance(other, TorusPoly):
            return NotImplemented
        return self._dimension == other._dimension and self._terms == other._terms

    def __hash__(self):
        return hash((self._dimension, tuple(self._terms.items())))

    def distance(self, other):
        """Largest coefficient-wise modulus of self - other"""
        _check_dimensions(self._dimension, other.dimension)
        keys = set(self._terms) | set(other.terms)
        return max((abs(self._terms.get(k, 0) - other.terms.get(k, 0)) for k in keys), default=0.0)

    # Evaluation

    def evaluate(self, z):
        """
        Value at a point, or at a batch of points.

        ``z`` has shape (d,) or (..., d); the result is a complex scalar or an
        array of shape (...). Powers are built by repeated multiplication, so
        z_j^0 = 1 also at z_j = 0.
        """
        points = np.asarray(z, dtype=complex)
        if points.ndim == 0 or points.shape[-1] != self._dimension:
            raise ValidationError(
                f'Expected points with {self._dimension} coordinates, got shape {points.shape}.',
                code='dimension_mismatch',
            )
        batch = points.shape[:-1]
        if not self._terms:
            values = np.zeros(batch, dtype=complex)
        else:
            exponents = np.array(list(self._terms), dtype=int)
            coefficients = np.array([complex(c) for c in self._terms.values()])
            monomials = np.ones((len(exponents),) + batch, dtype=complex)
            for j in range(self._dimension):
                top = int(exponents[:, j].max())
                if top == 0:
                    continue
                powers = np.empty((top + 1,) + batch, dtype=complex)
                powers[0] = 1.0
                for k in range(1, top + 1):
                    powers[k] = powers[k - 1] * points[..., j]
                monomials *= powers[exponents[:, j]]
            values = np.tensordot(coefficients, monomials, axes=1)
        if not batch:
            return complex(values)
        return values

    def __call__(self, z):
        return self.evaluate(z)

    # Rendering

    def __str__(self):
        if not self._terms:
            return '0'
        parts = []
        for monomial, coefficient in self.items():
            factors = [
                f'z{j + 1}' if e == 1 else f'z{j + 1}^{e}'
                for j, e in enumerate(monomial) if e
            ]
            text = str(coefficient)
            if not text.startswith('('):
                text = f'({text})'
            parts.append('*'.join([text] + factors))
        return ' + '.join(parts)

    def __repr__(self):
        return f'TorusPoly(dimension={self._dimension}, terms={len(self._terms)})'


class HermitianPoly:
    """
    Polynomial in z and zbar with exact integer coefficients.

    Terms are keyed by (a, b), the powers of z and zbar. Evaluation at a
    complex point z uses zbar = conj(z).
    """

    __slots__ = ('_terms',)

    def __init__(self, terms=()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        accumulated = {}
        for (a, b), coefficient in items:
            if not isinstance(coefficient, numbers.Integral):
                raise ValidationError(
                    {'terms': f'Coefficient {coefficient!r} is not an integer.'}, code='bad_coefficient'
                )
            if a < 0 or b < 0:
                raise ValidationError(
                    {'terms': f'Exponents must be non-negative, got ({a}, {b}).'},
                    code='negative_exponent',
                )
            key = (int(a), int(b))
            accumulated[key] = accumulated.get(key, 0) + int(coefficient)
        self._terms = {key: accumulated[key] for key in sorted(accumulated) if accumulated[key] != 0}

    @classmethod
    def constant(cls, value):
        return cls({(0, 0): value})

    @classmethod
    def z(cls):
        return cls({(1, 0): 1})

    @classmethod
    def zbar(cls):
        return cls({(0, 1): 1})

    @classmethod
    def one_minus_norm(cls):
        """The polynomial 1 - z*zbar."""
        return cls({(0, 0): 1, (1, 1): -1})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        if isinstance(other, numbers.Integral):
            other = HermitianPoly.constant(other)
        if not isinstance(other, HermitianPoly):
            return NotImplemented
        return HermitianPoly(list(self.items()) + list(other.items()))

    __radd__ = __add__

    def __neg__(self):
        return HermitianPoly({k: -c for k, c in self.items()})

    def __sub__(self, other):
        if isinstance(other, numbers.Integral):
            other = HermitianPoly.constant(other)
        if not isinstance(other, HermitianPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Integral):
            return HermitianPoly({k: other * c for k, c in self.items()})
        if not isinstance(other, HermitianPoly):
            return NotImplemented
        return HermitianPoly(
            ((a1 + a2, b1 + b2), c1 * c2)
            for (a1, b1), c1 in self.items()
            for (a2, b2), c2 in other.items()
        )

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, numbers.Integral) or exponent < 0:
            raise ValidationError('Only non-negative integer powers are defined.', code='bad_power')
        if exponent == 0:
            return HermitianPoly.constant(1)
        half = self ** (exponent // 2)
        return self * half * half if exponent % 2 else half * half

    def dbar_d(self):
        """Mixed derivative d^2/(dzbar dz), applied term by term."""
        return HermitianPoly(
            ((a - 1, b - 1), a * b * c) for (a, b), c in self.items() if a and b
        )

    def laplace_beltrami(self):
        """-(1 - z*zbar) d^2/(dzbar dz) of the scattering disk."""
        return -(HermitianPoly.one_minus_norm() * self.dbar_d())

    def evaluate(self, z):
        z = complex(z)
        zbar = z.conjugate()
        total = 0j
        for (a, b), c in self.items():
            total += c * _power(z, a) * _power(zbar, b)
        return total

    def __call__(self, z):
        return self.evaluate(z)

    def __eq__(self, other):
        if isinstance(other, numbers.Integral):
            other = HermitianPoly.constant(other)
        if not isinstance(other, HermitianPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return '0'
        text = ''
        for (a, b), c in self.items():
            factors = []
            if a:
                factors.append('z' if a == 1 else f'z^{a}')
            if b:
                factors.append('zbar' if b == 1 else f'zbar^{b}')
            magnitude = abs(c)
            if factors:
                body = '*'.join(factors) if magnitude == 1 else '*'.join([str(magnitude)] + factors)
            else:
                body = str(magnitude)
            if not text:
                text = f'-{body}' if c < 0 else body
            else:
                text += f' - {body}' if c < 0 else f' + {body}'
        return text

    def __repr__(self):
        return f'HermitianPoly({self})'


def _power(base, exponent):
    # z^0 = 1 even at z = 0
    result = 1
    for _ in range(exponent):
        result *= base
    return result
