from .base import *  # noqa
from .base import LOGGING, env

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = True

# LOGGING
# ------------------------------------------------------------------------------
LOGGING["loggers"]["decolite"]["level"] = env("DECO_LOG_LEVEL", default="DEBUG")

# django-extensions
# ------------------------------------------------------------------------------
# https://django-extensions.readthedocs.io/en/latest/installation_instructions.html#configuration
INSTALLED_APPS += ["django_extensions"]  # noqa F405
