import re
from dataclasses import dataclass, field

import sympy
from django.core.exceptions import ValidationError
from sympy import QQ
from sympy.polys.polyerrors import CoercionFailed, IsomorphismFailed, NotAlgebraic

_FIELD_PATTERN = re.compile(r'^\s*Q\s*(?:\((?P<generators>.*)\))?\s*$')
_BARE_ROOT = re.compile(r'sqrt\s*(\d+)')


def parse_field(text):
    """
    Number field from its name: "Q" for the rationals, "Q(sqrt2)" or
    "Q(sqrt(2), sqrt(3))" for an algebraic extension.
    """
    match = _FIELD_PATTERN.match(text or 'Q')
    if not match:
        raise ValidationError({'field': f'Cannot read field {text!r}.'}, code='bad_field')
    generators = match.group('generators')
    if not generators or not generators.strip():
        return QQ
    try:
        parsed = [sympy.sympify(_BARE_ROOT.sub(r'sqrt(\1)', part)) for part in generators.split(',')]
        return QQ.algebraic_field(*parsed)
    except (sympy.SympifyError, NotAlgebraic, IsomorphismFailed, TypeError) as exc:
        raise ValidationError({'field': f'Cannot build field {text!r}: {exc}'}, code='bad_field') from exc


def in_field(domain, value):
    try:
        domain.from_sympy(value)
    except (CoercionFailed, NotAlgebraic, IsomorphismFailed, ValueError):
        return False
    return True


@dataclass(frozen=True)
class RationalBasisInput:
    """
    Frequencies written over a positive basis: eta = B b with B a rational
    d x D matrix and b a vector of D positive reals in ``field``.
    """

    B: sympy.ImmutableMatrix
    b: tuple
    field: str = 'Q'

    def __post_init__(self):
        object.__setattr__(self, 'B', sympy.ImmutableMatrix(self.B))
        object.__setattr__(self, 'b', tuple(sympy.sympify(value) for value in self.b))
        self.clean()

    def clean(self):
        if self.B.cols != len(self.b) or not self.b:
            raise ValidationError({'B': f'B has {self.B.cols} columns for {len(self.b)} basis values.'}, code='shape')
        if any(not entry.is_rational for entry in self.B):
            raise ValidationError({'B': 'Entries of B must be rational.'}, code='irrational_entry')
        if any(value.is_positive is not True for value in self.b):
            raise ValidationError({'b': 'Basis values must be positive.'}, code='non_positive_basis')
        domain = self.domain
        for index, value in enumerate(self.b):
            if not in_field(domain, value):
                raise ValidationError({'b': f'b_{index + 1} = {value} is not in {self.field}.'}, code='not_in_field')
        for index, value in enumerate(self.eta):
            if value.is_positive is not True:
                raise ValidationError({'B': f'eta_{index + 1} = {value} is not positive.'}, code='non_positive_eta')

    @property
    def domain(self):
        return parse_field(self.field)

    @property
    def b_vector(self):
        return sympy.ImmutableMatrix(self.b)

    @property
    def eta(self):
        return tuple(sympy.expand(value) for value in self.B * self.b_vector)

    @property
    def dimension(self):
        return self.B.rows


@dataclass(frozen=True)
class LatticeDecomposition:
    """eta = A q with A a non-negative integer matrix and q a positive vector."""

    A: sympy.ImmutableMatrix
    q: tuple
    certificate: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, 'A', sympy.ImmutableMatrix(self.A))
        object.__setattr__(self, 'q', tuple(sympy.sympify(value) for value in self.q))
        self.clean()

    def clean(self):
        if any(not (entry.is_integer and entry >= 0) for entry in self.A):
            raise ValidationError({'A': 'A must have non-negative integer entries.'}, code='bad_lattice')
        if any(value.is_positive is not True for value in self.q):
            raise ValidationError({'q': 'q must be strictly positive.'}, code='non_positive_q')

    @property
    def q_vector(self):
        return sympy.ImmutableMatrix(self.q)

    def q_float(self):
        return [float(value) for value in self.q]
