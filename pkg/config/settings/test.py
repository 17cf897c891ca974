"""
With these settings, tests run faster.
"""

from .base import *  # noqa
from .base import LOGGING, ROOT_DIR, env

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#secret-key
SECRET_KEY = env(
    "DJANGO_SECRET_KEY",
    default="JyxLzLlfbkQ3F4oQznaxIeGcsTd8Y02VQTEqdUYQhEK84jf5FzJh71hlsyWDxUFV",
)
# https://docs.djangoproject.com/en/dev/ref/settings/#test-runner
TEST_RUNNER = "django.test.runner.DiscoverRunner"

# LOGGING
# ------------------------------------------------------------------------------
# caplog still sees records through propagation
LOGGING["loggers"]["decolite"]["propagate"] = True
LOGGING["loggers"]["decolite"]["handlers"] = []

# EXPERIMENTS
# ------------------------------------------------------------------------------
DECO_OUTPUT_DIR = str(ROOT_DIR / ".pytest_runs")
