from factory import Factory

from decolite.lite.config import LiteArchitectureConfig


class TinyArchitectureFactory(Factory):
    """Two feature channels and short kernels, small enough for finite differences."""

    n_filters = 2
    first_layer_kernel_sizes = (4, 2)
    dwsc_kernel_sizes = (3, 3)
    dwsc_dilations = (1, 2)
    increasing_lengths = (2,)
    decreasing_lengths = (2,)
    peak_lengths = (4,)

    class Meta:
        model = LiteArchitectureConfig
