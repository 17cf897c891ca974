"""
Hand-crafted, frozen first-layer filters.

Increasing-trend kernels of even length ``k`` are ``k/2`` times -1 followed
by ``k/2`` times +1, decreasing-trend kernels are their negation and a peak
kernel of length ``4m`` is ``m`` times -1, ``2m`` times +1, ``m`` times -1.
All of them sum to zero.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from decolite.utils.exceptions import ConfigError

INCREASING = "increasing"
DECREASING = "decreasing"
PEAK = "peak"


def increasing_kernel(length):
    if length < 2 or length % 2:
        raise ConfigError("trend filter lengths must be even, got {0}".format(length))
    half = length // 2
    return np.concatenate([-np.ones(half), np.ones(half)])


def decreasing_kernel(length):
    return -increasing_kernel(length)


def peak_kernel(length):
    if length < 4 or length % 4:
        raise ConfigError(
            "peak filter lengths must be divisible by 4, got {0}".format(length)
        )
    quarter = length // 4
    return np.concatenate([-np.ones(quarter), np.ones(2 * quarter), -np.ones(quarter)])


@dataclass(frozen=True)
class CustomFilterBank:
    kernels: Tuple[Tuple[str, int, np.ndarray], ...]
    trainable = False

    def __len__(self):
        return len(self.kernels)

    def of_kind(self, kind) -> List[np.ndarray]:
        return [kernel for name, _, kernel in self.kernels if name == kind]


def build_custom_filters(config) -> CustomFilterBank:
    kernels = []
    for length in config.increasing_lengths:
        kernels.append((INCREASING, length, increasing_kernel(length)))
    for length in config.decreasing_lengths:
        kernels.append((DECREASING, length, decreasing_kernel(length)))
    for length in config.peak_lengths:
        kernels.append((PEAK, length, peak_kernel(length)))
    for _, _, kernel in kernels:
        kernel.setflags(write=False)
    return CustomFilterBank(tuple(kernels))
