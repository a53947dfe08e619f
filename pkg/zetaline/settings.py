"""
Django settings for the zetaline project.

The project hosts the ``oneline`` app: rigorous evaluation and verification
of explicit bounds for the Riemann zeta-function on the line Re s = 1.
Every toolkit knob below can be overridden from the environment or a
``.env`` file through python-decouple.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-zetaline-local-batch-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'oneline',
]

MIDDLEWARE = []


# Database
# Only `verify --save` writes here.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DATABASE_PATH', default=str(BASE_DIR / 'db.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Toolkit configuration

ONELINE_PREC = config('ONELINE_PREC', default=128, cast=int)
ONELINE_SIEVE_LIMIT = config('ONELINE_SIEVE_LIMIT', default=10_000_000, cast=int)
ONELINE_SERIES_LIMIT = config('ONELINE_SERIES_LIMIT', default=100_000, cast=int)

# Euler-Maclaurin and quadrature
ONELINE_EM_ORDER = config('ONELINE_EM_ORDER', default=12, cast=int)
ONELINE_EM_MIN_TERMS = config('ONELINE_EM_MIN_TERMS', default=50, cast=int)
ONELINE_QUAD_PANELS = config('ONELINE_QUAD_PANELS', default=32, cast=int)
ONELINE_QUAD_POINTS = config('ONELINE_QUAD_POINTS', default=2, cast=int)
ONELINE_JET_ORDER = config('ONELINE_JET_ORDER', default=7, cast=int)
ONELINE_VECTOR_THRESHOLD = config('ONELINE_VECTOR_THRESHOLD', default=20_000, cast=int)
ONELINE_T_CEILING = config('ONELINE_T_CEILING', default=10_000_000, cast=int)

# Scans and audits
ONELINE_WORKERS = config('ONELINE_WORKERS', default=1, cast=int)
ONELINE_AUDIT_GRID = config('ONELINE_AUDIT_GRID', default=200, cast=int)

# Zero tables
ONELINE_ZERO_ACCURACY = config('ONELINE_ZERO_ACCURACY', default='1e-9')
ONELINE_FETCH_TIMEOUT = config('ONELINE_FETCH_TIMEOUT', default=60, cast=int)


# Logging configuration

LOG_DIR = BASE_DIR / 'logs'
LOG_DIR.mkdir(exist_ok=True)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'oneline_file': {
            'level': 'WARNING',
            'class': 'logging.FileHandler',
            'filename': LOG_DIR / 'oneline.log',
            'formatter': 'simple',
        },
        'console': {
            'level': config('ONELINE_LOG_LEVEL', default='INFO'),
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'oneline': {
            'handlers': ['oneline_file', 'console'],
            'level': 'DEBUG',
            'propagate': True,
        },
    },
}
