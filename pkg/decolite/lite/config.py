from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple

from decolite.utils.exceptions import ConfigError


@dataclass(frozen=True)
class LiteArchitectureConfig:
    """
    Hyperparameters of one LITE classifier.

    ``first_layer_filters`` gives the number of trainable filters per first
    layer kernel size; left as ``None`` every kernel size gets ``n_filters``
    filters, the layout of the upstream LITE model.
    """

    n_filters: int = 32
    first_layer_kernel_sizes: Tuple[int, ...] = (40, 20, 10)
    first_layer_filters: Optional[Tuple[int, ...]] = None
    dwsc_kernel_sizes: Tuple[int, int] = (20, 20)
    dwsc_dilations: Tuple[int, int] = (2, 4)
    increasing_lengths: Tuple[int, ...] = (2, 4, 8, 16, 32, 64)
    decreasing_lengths: Tuple[int, ...] = (2, 4, 8, 16, 32, 64)
    peak_lengths: Tuple[int, ...] = (4, 8, 16, 32, 64)
    bn_momentum: float = 0.9
    bn_epsilon: float = 1e-5

    def __post_init__(self):
        for name in (
            "first_layer_kernel_sizes",
            "dwsc_kernel_sizes",
            "dwsc_dilations",
            "increasing_lengths",
            "decreasing_lengths",
            "peak_lengths",
        ):
            value = tuple(int(v) for v in getattr(self, name))
            object.__setattr__(self, name, value)
        if self.first_layer_filters is not None:
            object.__setattr__(
                self, "first_layer_filters", tuple(int(v) for v in self.first_layer_filters)
            )

        if self.n_filters < 1:
            raise ConfigError("n_filters must be positive")
        if not self.first_layer_kernel_sizes:
            raise ConfigError("the first layer needs at least one kernel size")
        if len(self.dwsc_kernel_sizes) != 2 or len(self.dwsc_dilations) != 2:
            raise ConfigError("LITE has exactly two depthwise separable blocks")
        if min(self.first_layer_kernel_sizes + self.dwsc_kernel_sizes) < 1:
            raise ConfigError("kernel sizes must be positive")
        if min(self.dwsc_dilations) < 1:
            raise ConfigError("dilations must be positive")
        if len(self.filters_per_kernel) != len(self.first_layer_kernel_sizes):
            raise ConfigError("first_layer_filters needs one count per kernel size")
        if min(self.filters_per_kernel) < 1:
            raise ConfigError("every first layer kernel size needs a filter")
        if not 0.0 <= self.bn_momentum < 1.0 or self.bn_epsilon <= 0:
            raise ConfigError("batch norm momentum must be in [0, 1), epsilon > 0")

    @property
    def filters_per_kernel(self):
        if self.first_layer_filters is None:
            return (self.n_filters,) * len(self.first_layer_kernel_sizes)
        return self.first_layer_filters

    @property
    def n_custom_filters(self):
        return (
            len(self.increasing_lengths)
            + len(self.decreasing_lengths)
            + len(self.peak_lengths)
        )

    @property
    def first_block_channels(self):
        return sum(self.filters_per_kernel) + self.n_custom_filters

    def to_dict(self):
        return {
            key: list(value) if isinstance(value, tuple) else value
            for key, value in asdict(self).items()
        }

    @classmethod
    def from_dict(cls, values):
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(
                "unknown architecture settings: {0}".format(", ".join(sorted(unknown)))
            )
        return cls(**values)
