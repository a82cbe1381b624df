"""
Django settings for the torus_schur project.

The project has no database and no web surface; Django provides the settings
layer, the app registry, management commands and the test runner.
Every tunable is read through python-decouple so a ``.env`` file or the
environment can override it.
"""

from pathlib import Path
from decouple import config, Csv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('TORUS_SECRET_KEY', default='torus-schur-local-only')

DEBUG = config('TORUS_DEBUG', default=False, cast=bool)
ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'polycore',
    'scattering',
    'schur',
    'torusint',
    'freqlattice',
    'layered',
    'verification',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Numerics

# Points per axis of the torus grid for d <= 2 and for d >= 3.
TORUS_GRID_POINTS = config('TORUS_GRID_POINTS', default=64, cast=int)
TORUS_GRID_POINTS_3D = config('TORUS_GRID_POINTS_3D', default=32, cast=int)

TORUS_RANDOM_SEED = config('TORUS_RANDOM_SEED', default=20240601, cast=int)

# Worker threads for `verify all --parallel`.
TORUS_THREADS = config('TORUS_THREADS', default=1, cast=int)

TORUS_L_SCHEDULE = config(
    'TORUS_L_SCHEDULE',
    default='250,500,1000,2000,4000',
    cast=Csv(cast=float),
)

TORUS_MAX_SCHUR_STEPS = config('TORUS_MAX_SCHUR_STEPS', default=64, cast=int)

# One knob per numeric claim checked by `verify all`.
TORUS_TOLERANCES = {
    'taylor': 1e-10,
    'structure': 1e-12,
    'pointwise': 1e-10,
    'gram': 1e-8,
    'szego': 1e-8,
    'szego_3d': 1e-6,
    'poisson': 1e-8,
    'counterexample': 1e-6,
    'counterexample_gap': 0.14,
    'birkhoff': 5e-3,
    'lattice_line': 1e-12,
    'trace_single': 1e-10,
    'trace_multi': 1e-2,
    'reflection': 1e-10,
    'round_trip': 1e-10,
}

VERIFICATION_FIXTURES_DIR = BASE_DIR / 'verification' / 'fixtures'


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': config('TORUS_LOG_LEVEL', default='INFO'),
    },
}

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}
