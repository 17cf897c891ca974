"""
Exception hierarchy shared by every decolite package.

Each class carries ``exit_code``, the status the command line returns when
the error escapes a management command.
"""
from django.core.exceptions import ImproperlyConfigured


class DecoError(Exception):
    exit_code = 1


class UsageError(DecoError):
    """Bad call: empty inputs, unknown flags, wrong argument combinations."""


class ConfigError(DecoError, ImproperlyConfigured):
    """Invalid hyperparameters or architecture settings."""


class DimensionError(DecoError, ValueError):
    pass


class InputError(DecoError, ValueError):
    pass


class StateError(DecoError):
    pass


class DataError(DecoError):
    """Unreadable, malformed or inconsistent dataset or checkpoint files."""

    exit_code = 2


class NumericError(DecoError, ArithmeticError):
    exit_code = 3

    def __init__(self, message, layer=None):
        if layer is not None:
            message = "{0} (layer: {1})".format(message, layer)
        super().__init__(message)
        self.layer = layer


class DivergenceError(NumericError):
    def __init__(self, message, epoch):
        super().__init__("{0} at epoch {1}".format(message, epoch))
        self.epoch = epoch
