import numbers
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

from schur.models import SchurData
from schur.operations import quad_at


@dataclass(frozen=True)
class TorusGrid:
    """
    Tensor grid of N-th roots of unity on T^d. Each of the N^d nodes carries
    weight N^-d, so the grid mean approximates the normalized measure tau.
    """

    dimension: int
    points_per_axis: int

    def __post_init__(self):
        self.clean()

    def clean(self):
        if not isinstance(self.dimension, numbers.Integral) or self.dimension < 1:
            raise ValidationError({'dimension': 'Dimension must be a positive integer.'}, code='bad_dimension')
        if not isinstance(self.points_per_axis, numbers.Integral) or self.points_per_axis < 2:
            raise ValidationError({'points_per_axis': 'At least two points per axis.'}, code='grid_too_small')

    @classmethod
    def default(cls, dimension, points=64, points_3d=32):
        return cls(dimension, points if dimension <= 2 else points_3d)

    @property
    def size(self):
        return self.points_per_axis ** self.dimension

    def angles(self):
        """(N^d, d) array of node angles."""
        axis = 2 * np.pi * np.arange(self.points_per_axis) / self.points_per_axis
        mesh = np.meshgrid(*([axis] * self.dimension), indexing='ij')
        return np.stack(mesh, axis=-1).reshape(-1, self.dimension)

    def nodes(self, radius=1.0):
        """(N^d, d) array of nodes, optionally dilated into the polydisk."""
        return radius * np.exp(1j * self.angles())


@dataclass(frozen=True)
class TorusLine:
    """omega -> (e^{i eta_1 omega}, ..., e^{i eta_d omega})."""

    eta: tuple

    def __post_init__(self):
        object.__setattr__(self, 'eta', tuple(float(value) for value in self.eta))
        self.clean()

    def clean(self):
        if not self.eta:
            raise ValidationError({'eta': 'At least one frequency is required.'}, code='empty_frequencies')
        if any(not np.isfinite(value) or value <= 0 for value in self.eta):
            raise ValidationError({'eta': 'Frequencies must be finite and positive.'}, code='bad_frequency')

    @property
    def dimension(self):
        return len(self.eta)

    def at(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.exp(1j * omega[..., np.newaxis] * np.array(self.eta))

    def scaled(self, factor):
        return TorusLine(tuple(factor * value for value in self.eta))


@dataclass(frozen=True)
class MeasureWeight:
    """Density prod_{j<=n} (1 - |r_j|^2) / |Phi*_n|^2 of mu_{f_n} against tau."""

    data: SchurData
    level: int

    def __post_init__(self):
        self.clean()

    def clean(self):
        if not 0 <= self.level <= self.data.m:
            raise ValidationError({'level': f'Level {self.level} outside 0..{self.data.m}.'}, code='bad_level')

    @property
    def quad(self):
        return quad_at(self.data, self.level)

    def density(self, points):
        phi_star = np.asarray(self.quad.phi_star.evaluate(points))
        return float(self.data.level_product(self.level)) / np.abs(phi_star) ** 2
