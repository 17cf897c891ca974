"""Pairwise DTW distances between the final-layer filters of several models."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from decolite.diversity.dtw import dtw
from decolite.lite.models import LiteModel, extract_final_filters
from decolite.utils.exceptions import ConfigError, UsageError
from decolite.utils.files import write_csv

logger = logging.getLogger(__name__)


def filter_label(model_id, index):
    return "{0}:{1}".format(model_id, index)


@dataclass(frozen=True)
class FilterDistanceMatrix:
    labels: List[Tuple[str, int]]
    d: np.ndarray

    def __len__(self):
        return len(self.labels)

    @property
    def label_strings(self):
        return [filter_label(model_id, index) for model_id, index in self.labels]

    def to_csv(self, path):
        strings = self.label_strings
        rows = ([label] + [float(value) for value in row] for label, row in zip(strings, self.d))
        return write_csv(path, ["label"] + strings, rows)


def filter_distance_matrix(
    models: Sequence[LiteModel], model_ids: Optional[Sequence[str]] = None
) -> FilterDistanceMatrix:
    if not models:
        raise UsageError("no models to compare")
    if model_ids is None:
        model_ids = ["model{0}".format(position) for position in range(len(models))]
    if len(model_ids) != len(models):
        raise UsageError("one id per model is needed")

    banks = [extract_final_filters(model) for model in models]
    shapes = {bank.shape for bank in banks}
    if len(shapes) != 1:
        raise ConfigError("final filter shapes differ: {0}".format(sorted(shapes)))
    if not banks[0].is_default_shape:
        logger.warning("final filters have shape %s, not the default 32x20", banks[0].shape)

    labels, rows = [], []
    for model_id, bank in zip(model_ids, banks):
        for index, values in enumerate(bank.values):
            labels.append((model_id, index))
            rows.append(values)

    size = len(rows)
    d = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            d[i, j] = d[j, i] = dtw(rows[i], rows[j])
    logger.debug("computed %d filter distances", size * (size - 1) // 2)
    return FilterDistanceMatrix(labels, d)
