# -*- coding:utf-8 -*-
"""
Settings for ``toral_lattice``.

All tunables are ordinary Django settings prefixed with ``TORAL_LATTICE_``
and are looked up lazily, so they can be changed at runtime (tests do that
through ``TestSettingsManager``). Outside a Django project ``setup()``
configures a minimal standalone settings object.
"""

import os

import django
from django.conf import settings

DEFAULTS = {
    # N**2 above this refuses to build permutation tables
    "MAX_LATTICE_POINTS": 2 ** 24,
    # D**n * N**2 above this refuses the weighted (unaligned) CS path
    "MAX_TABLE_CELLS": 2 ** 26,
    # D**n above this keeps probability tables sparse
    "DENSE_TABLE_LIMIT": 2 ** 24,
    "CHUNK_SIZE": 2 ** 16,
    "THREADS": 1,
    "BREAKING_RATE_FRACTION": 0.1,
    "BREAKING_ABSOLUTE_GAP": 0.05,
    "EGOROV_THRESHOLD": 0.1,
}

PREFIX = "TORAL_LATTICE_"

VERBOSITY_LEVELS = {0: "WARNING", 1: "INFO", 2: "DEBUG", 3: "DEBUG"}


def logging_config(verbosity=1):
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"}},
        "handlers": {
            "stderr": {"class": "logging.StreamHandler", "formatter": "plain", "stream": "ext://sys.stderr"}
        },
        "loggers": {
            "toral_lattice": {"handlers": ["stderr"], "level": VERBOSITY_LEVELS.get(verbosity, "DEBUG")},
        },
    }


def setup(verbosity=1, **overrides):
    """
    Configure standalone settings unless a settings module is already
    active. Returns ``True`` if this call configured Django.
    """
    if settings.configured:
        return False
    options = {
        "USE_I18N": False,
        "INSTALLED_APPS": ["toral_lattice"],
        "LOGGING": logging_config(verbosity),
    }
    options.update(overrides)
    settings.configure(**options)
    django.setup()
    return True


def get_setting(name):
    if not settings.configured:
        setup()
    if name == "THREADS" and os.environ.get(PREFIX + "THREADS"):
        return max(1, int(os.environ[PREFIX + "THREADS"]))
    return getattr(settings, PREFIX + name, DEFAULTS[name])
