import numbers
from dataclasses import dataclass

from django.core.exceptions import ValidationError


def _check_non_negative(field, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError({field: f'{value!r} is not an integer.'}, code='bad_index')
    if value < 0:
        raise ValidationError({field: f'Index must be non-negative, got {value}.'}, code='negative_index')


@dataclass(frozen=True)
class ScatteringIndex:
    """The pair (p, q) labelling a scattering polynomial."""

    p: int
    q: int

    def __post_init__(self):
        self.clean()

    def clean(self):
        _check_non_negative('p', self.p)
        _check_non_negative('q', self.q)

    def __str__(self):
        return f'({self.p},{self.q})'


@dataclass(frozen=True)
class MultiIndex:
    """
    Finitely supported vector (alpha_1, ..., alpha_n), zero beyond n.

    Trailing zeros are dropped, so MultiIndex((1, 0)) == MultiIndex((1,)) and
    the zero multi-index has no entries.
    """

    entries: tuple = ()

    def __post_init__(self):
        entries = tuple(self.entries)
        while entries and entries[-1] == 0:
            entries = entries[:-1]
        object.__setattr__(self, 'entries', entries)
        self.clean()

    def clean(self):
        for position, value in enumerate(self.entries, start=1):
            _check_non_negative(f'alpha_{position}', value)

    @classmethod
    def zero(cls):
        return cls(())

    def __getitem__(self, position):
        """alpha_position for 1-based positions; zero outside the stored range."""
        if 1 <= position <= len(self.entries):
            return self.entries[position - 1]
        return 0

    @property
    def length(self):
        """max supp alpha, 0 for the zero multi-index."""
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def is_contiguous(self):
        return all(self.entries)

    def in_level(self, n):
        """Membership in A_n: support inside {1..n}."""
        return self.length <= n

    def __str__(self):
        if self.is_zero():
            return '0'
        return '(' + ','.join(str(value) for value in self.entries) + ')'
