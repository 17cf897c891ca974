import os
import sys

if __name__ == "__main__":
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")

    import django

    django.setup()

    from decolite.experiments.cli import dispatch

    sys.exit(dispatch(sys.argv[1:]))
