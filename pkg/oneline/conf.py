"""
Toolkit settings with built-in fallbacks.

Numerical modules run inside worker processes that may never configure
Django, so every lookup falls back to DEFAULTS.
"""

from django.conf import settings

DEFAULTS = {
    'ONELINE_PREC': 128,
    'ONELINE_SIEVE_LIMIT': 10_000_000,
    'ONELINE_SERIES_LIMIT': 100_000,
    'ONELINE_EM_ORDER': 12,
    'ONELINE_EM_MIN_TERMS': 50,
    'ONELINE_QUAD_PANELS': 32,
    'ONELINE_QUAD_POINTS': 2,
    'ONELINE_JET_ORDER': 7,
    'ONELINE_VECTOR_THRESHOLD': 20_000,
    'ONELINE_T_CEILING': 10_000_000,
    'ONELINE_WORKERS': 1,
    'ONELINE_AUDIT_GRID': 200,
    'ONELINE_ZERO_ACCURACY': '1e-9',
    'ONELINE_FETCH_TIMEOUT': 60,
}


def setting(name):
    """Get a toolkit setting, falling back to the built-in default"""
    if settings.configured:
        return getattr(settings, name, DEFAULTS[name])
    return DEFAULTS[name]
