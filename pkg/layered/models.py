import numbers
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

SOURCES = ('schur', 'ode')


def _is_real(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and np.isfinite(value)


@dataclass(frozen=True)
class LayeredMedium:
    """
    Step impedance on [0, b]: a_0 on [0, y_1), a_j on [y_j, y_{j+1}) and a_d
    on [y_d, b].
    """

    b: float
    y: tuple
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, 'y', tuple(self.y))
        object.__setattr__(self, 'a', tuple(self.a))
        self.clean()

    def clean(self):
        if not _is_real(self.b) or self.b <= 0:
            raise ValidationError({'b': 'Domain length must be positive.'}, code='bad_length')
        if not self.y:
            raise ValidationError({'y': 'At least one interface is required.'}, code='no_interfaces')
        if any(not _is_real(value) for value in self.y + self.a):
            raise ValidationError('Interfaces and impedances must be finite reals.', code='not_real')
        if len(self.a) != len(self.y) + 1:
            raise ValidationError(
                {'a': f'{len(self.y)} interfaces need {len(self.y) + 1} impedances, got {len(self.a)}.'},
                code='bad_impedance_count',
            )
        if any(value <= 0 for value in self.a):
            raise ValidationError({'a': 'Impedances must be strictly positive.'}, code='non_positive_impedance')
        points = (0,) + self.y + (self.b,)
        if any(later <= earlier for earlier, later in zip(points, points[1:])):
            raise ValidationError({'y': 'Interfaces must satisfy 0 < y_1 < ... < y_d < b.'}, code='unordered_interfaces')

    @property
    def interfaces(self):
        return len(self.y)

    @property
    def reflection_parameters(self):
        """r_j = (a_{j-1} - a_j) / (a_{j-1} + a_j), j = 1..d."""
        return tuple((left - right) / (left + right) for left, right in zip(self.a, self.a[1:]))

    @property
    def thicknesses(self):
        """eta_j = y_j - y_{j-1} with y_0 = 0."""
        return tuple(later - earlier for earlier, later in zip((0,) + self.y, self.y))

    def segments(self):
        """(thickness, impedance) of every segment from x = 0 to x = b, the last one [y_d, b] included."""
        return list(zip(self.thicknesses + (self.b - self.y[-1],), self.a))


@dataclass(frozen=True, eq=False)
class ReflectionSpectrum:
    omegas: np.ndarray
    R: np.ndarray
    source: str = 'schur'

    def __post_init__(self):
        object.__setattr__(self, 'omegas', np.asarray(self.omegas, dtype=float))
        object.__setattr__(self, 'R', np.asarray(self.R, dtype=complex))
        self.clean()

    def clean(self):
        if self.source not in SOURCES:
            raise ValidationError({'source': f'Unknown source {self.source!r}.'}, code='bad_source')
        if self.omegas.shape != self.R.shape:
            raise ValidationError({'R': 'One reflection value per frequency is required.'}, code='shape')
        moduli = np.abs(self.R[self.omegas != 0])
        if moduli.size and not np.max(moduli) < 1:
            raise ValidationError({'R': f'|R| reached {np.max(moduli):.15f}.'}, code='energy_bound')

    @property
    def energy(self):
        return np.abs(self.R) ** 2

    def rows(self):
        """(omega, Re R, Im R, |R|^2) per frequency."""
        return [
            (float(omega), float(value.real), float(value.imag), float(power))
            for omega, value, power in zip(self.omegas, self.R, self.energy)
        ]
