import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from django.core.exceptions import ValidationError

from polycore.models import TorusPoly


def _as_scalar(value):
    # numpy scalars would hijack TorusPoly arithmetic
    if isinstance(value, (Fraction, numbers.Integral)) and not isinstance(value, bool):
        return Fraction(value)
    return complex(value)


@dataclass(frozen=True)
class SchurData:
    """
    Schur parameters r_0..r_m and variable allocation nu_1..nu_m.

    ``nu`` is 1-based. Parameters may be complex or exact rationals
    (int / Fraction); exact parameters keep polynomial arithmetic exact.
    """

    dimension: int
    r: tuple
    nu: tuple

    def __post_init__(self):
        object.__setattr__(self, 'r', tuple(_as_scalar(value) for value in self.r))
        object.__setattr__(self, 'nu', tuple(self.nu))
        self.clean()

    def clean(self):
        if isinstance(self.dimension, bool) or not isinstance(self.dimension, numbers.Integral) or self.dimension < 1:
            raise ValidationError({'dimension': 'Dimension must be a positive integer.'}, code='bad_dimension')
        if not self.r:
            raise ValidationError({'r': 'At least r_0 is required.'}, code='empty_parameters')
        if self.r[0] != 0:
            raise ValidationError({'r': f'r_0 must be 0, got {self.r[0]}.'}, code='nonstandard')
        for j, value in enumerate(self.r):
            if abs(value) >= 1:
                raise ValidationError(
                    {'r': f'|r_{j}| = {float(abs(value)):.6g} is not below 1.'}, code='parameter_out_of_disk'
                )
        if len(self.nu) != len(self.r) - 1:
            raise ValidationError(
                {'nu': f'Expected {len(self.r) - 1} allocations, got {len(self.nu)}.'}, code='bad_allocation'
            )
        for j, variable in enumerate(self.nu, start=1):
            if isinstance(variable, bool) or not isinstance(variable, numbers.Integral) or not 1 <= variable <= self.dimension:
                raise ValidationError(
                    {'nu': f'nu_{j} = {variable!r} is outside 1..{self.dimension}.'}, code='bad_allocation'
                )

    @classmethod
    def random(cls, dimension, steps, rng, radius=0.6):
        """Random data with |r_j| < radius and uniformly drawn allocation."""
        moduli = radius * np.sqrt(rng.uniform(0, 1, size=steps))
        angles = rng.uniform(0, 2 * np.pi, size=steps)
        r = [0j] + [complex(rho * np.exp(1j * theta)) for rho, theta in zip(moduli, angles)]
        nu = [int(v) for v in rng.integers(1, dimension + 1, size=steps)]
        return cls(dimension, r, nu)

    @property
    def m(self):
        return len(self.nu)

    def is_exact(self):
        return all(isinstance(value, Fraction) for value in self.r)

    def variable(self, j):
        """0-based coordinate index of the variable used at step j (1-based)."""
        return self.nu[j - 1] - 1

    def multidegree(self, n):
        """Exponent vector of z_{nu_1} ... z_{nu_n}."""
        counts = [0] * self.dimension
        for variable in self.nu[:n]:
            counts[variable - 1] += 1
        return tuple(counts)

    def level_product(self, n):
        """prod_{j=1}^n (1 - |r_j|^2); exact for rational parameters."""
        product = Fraction(1) if self.is_exact() else 1.0
        for value in self.r[1:n + 1]:
            product *= 1 - abs(value) ** 2
        return product

    def truncated(self, n):
        return SchurData(self.dimension, self.r[:n + 1], self.nu[:n])

    def negated(self):
        return SchurData(self.dimension, [-value for value in self.r], self.nu)

    def tail(self, n):
        """Data (0, r_{n+1}, ..., r_m) with allocation nu_{n+1}, ..., nu_m."""
        return SchurData(self.dimension, (0,) + self.r[n + 1:], self.nu[n:])

    def max_modulus(self):
        return max((float(abs(value)) for value in self.r), default=0.0)


@dataclass(frozen=True)
class PolyQuad:
    """The entries Psi_n, Psi*_n, Phi_n, Phi*_n of P_n = [[Psi, Psi*], [-Phi, Phi*]]."""

    level: int
    psi: TorusPoly
    psi_star: TorusPoly
    phi: TorusPoly
    phi_star: TorusPoly

    def __post_init__(self):
        self.clean()

    def clean(self):
        if self.phi_star.constant_term != 1:
            raise ValidationError(
                {'phi_star': f'Phi*_{self.level}(0) = {self.phi_star.constant_term}, expected 1.'},
                code='bad_constant_term',
            )

    @property
    def numerator(self):
        return self.psi_star - self.phi_star

    @property
    def denominator(self):
        return self.psi_star + self.phi_star


@dataclass(frozen=True)
class MonomialSubstitution:
    """
    z_j -> z^kappa(j): kappa holds one nonzero exponent vector of length
    ``target_dimension`` per source variable.
    """

    kappa: tuple
    target_dimension: int

    def __post_init__(self):
        object.__setattr__(self, 'kappa', tuple(tuple(int(e) for e in row) for row in self.kappa))
        self.clean()

    def clean(self):
        if self.target_dimension < 1:
            raise ValidationError({'target_dimension': 'Target dimension must be positive.'}, code='bad_dimension')
        for j, row in enumerate(self.kappa, start=1):
            if len(row) != self.target_dimension:
                raise ValidationError(
                    {'kappa': f'kappa({j}) has {len(row)} entries, expected {self.target_dimension}.'},
                    code='dimension_mismatch',
                )
            if any(e < 0 for e in row):
                raise ValidationError({'kappa': f'kappa({j}) has a negative entry.'}, code='negative_exponent')
            if not any(row):
                raise ValidationError({'kappa': f'kappa({j}) is the zero multi-index.'}, code='zero_multi_index')

    @classmethod
    def identity(cls, dimension):
        return cls(tuple(tuple(int(i == j) for i in range(dimension)) for j in range(dimension)), dimension)

    @property
    def source_dimension(self):
        return len(self.kappa)

    def block(self, variable):
        """
        1-based target variables enumerating kappa(variable): ascending
        index, each repeated per its exponent.
        """
        row = self.kappa[variable - 1]
        return tuple(k + 1 for k, exponent in enumerate(row) for _ in range(exponent))
