import logging
from typing import List, Optional, Sequence

import numpy as np

from decolite.utils.exceptions import DataError, UsageError

logger = logging.getLogger(__name__)

STD_GUARD = 1e-8


def z_normalize(series):
    """(x - mean) / std with the population std; constant series map to zeros."""
    series = np.asarray(series, dtype=np.float64)
    if series.size < 1:
        raise UsageError("cannot normalize an empty series")
    std = series.std()
    if std < STD_GUARD:
        return np.zeros_like(series)
    return (series - series.mean()) / std


def fill_missing(series):
    """Linear interpolation of interior NaNs; edge NaNs take the nearest value."""
    series = np.asarray(series, dtype=np.float64)
    missing = np.isnan(series)
    if not missing.any():
        return series
    if missing.all():
        raise DataError("series contains no observed values")
    positions = np.arange(series.size)
    filled = series.copy()
    filled[missing] = np.interp(positions[missing], positions[~missing], series[~missing])
    return filled


def pad_to_length(series, length):
    series = np.asarray(series, dtype=np.float64)
    if series.size > length:
        logger.warning("truncating series of length %d to %d", series.size, length)
        return series[:length]
    return np.concatenate([series, np.zeros(length - series.size)])


def handle_irregular(
    series_set: Sequence[np.ndarray], length: Optional[int] = None, normalize=True
) -> List[np.ndarray]:
    """
    Makes a set of series fixed-length: NaNs are interpolated, each series is
    z-normalized, then right-padded with zeros to ``length`` (default: the
    longest series of the set).
    """
    if length is None:
        length = max(len(series) for series in series_set)
    prepared = []
    for series in series_set:
        series = fill_missing(series)
        if normalize:
            series = z_normalize(series)
        prepared.append(pad_to_length(series, length))
    return prepared
