import numbers
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError


def _fixture_paths(pattern):
    return tuple(str(path) for path in sorted(Path(settings.VERIFICATION_FIXTURES_DIR).glob(pattern)))


def resolve_path(path):
    """Relative paths that do not exist are looked up among the bundled fixtures."""
    candidate = Path(path)
    if candidate.is_absolute() or candidate.exists():
        return candidate
    return Path(settings.VERIFICATION_FIXTURES_DIR) / candidate


@dataclass(frozen=True)
class RunConfig:
    """Everything one `verify all` run depends on; a fixed seed gives a byte-identical report."""

    schur_fixtures: tuple = ()
    media: tuple = ()
    lattice_inputs: tuple = ()
    grid_points: int = 64
    grid_points_3d: int = 32
    taylor_degree: int = 6
    eigen_max: int = 12
    l_schedule: tuple = (250.0, 500.0, 1000.0, 2000.0, 4000.0)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    parallel: bool = False
    timings: bool = False
    threads: int = 1

    def __post_init__(self):
        for name in ('schur_fixtures', 'media', 'lattice_inputs'):
            object.__setattr__(self, name, tuple(str(path) for path in getattr(self, name)))
        object.__setattr__(self, 'l_schedule', tuple(float(L) for L in self.l_schedule))
        object.__setattr__(self, 'tolerances', {**settings.TORUS_TOLERANCES, **self.tolerances})
        self.clean()

    def clean(self):
        errors = {}
        for name in ('grid_points', 'grid_points_3d'):
            if getattr(self, name) < 2:
                errors[name] = 'At least two points per axis.'
        for name in ('taylor_degree', 'eigen_max'):
            value = getattr(self, name)
            if not isinstance(value, numbers.Integral) or value < 0:
                errors[name] = 'Must be a non-negative integer.'
        if not self.l_schedule or any(L <= 0 for L in self.l_schedule):
            errors['l_schedule'] = 'Half-lengths must be positive.'
        unknown = set(self.tolerances) - set(settings.TORUS_TOLERANCES)
        if unknown:
            errors['tolerances'] = f"Unknown tolerances: {', '.join(sorted(unknown))}."
        elif any(value < 0 for value in self.tolerances.values()):
            errors['tolerances'] = 'Tolerances must be non-negative.'
        if self.threads < 1:
            errors['threads'] = 'At least one thread.'
        if errors:
            raise ValidationError(errors, code='bad_config')

    @classmethod
    def from_settings(cls, **overrides):
        """Bundled fixtures with the numerics configured in settings."""
        defaults = {
            'schur_fixtures': _fixture_paths('schur_*.json'),
            'media': _fixture_paths('medium_*.json'),
            'lattice_inputs': _fixture_paths('lattice_*.json'),
            'grid_points': settings.TORUS_GRID_POINTS,
            'grid_points_3d': settings.TORUS_GRID_POINTS_3D,
            'l_schedule': tuple(settings.TORUS_L_SCHEDULE),
            'seed': settings.TORUS_RANDOM_SEED,
            'threads': settings.TORUS_THREADS,
        }
        return cls(**{**defaults, **overrides})


@dataclass(frozen=True)
class CheckRecord:
    """One verified claim. ``value`` is None when the check raised; ``detail`` then holds the message."""

    name: str
    value: float = None
    reference: float = None
    tolerance: float = None
    passed: bool = False
    detail: str = ''
    runtime: float = None


@dataclass(frozen=True)
class Report:
    records: tuple

    @property
    def passed(self):
        return all(record.passed for record in self.records)

    @property
    def failures(self):
        return [record for record in self.records if not record.passed]
