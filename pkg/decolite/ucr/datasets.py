"""
Immutable, model-ready datasets and the seeded batch iterator.

A :class:`TimeSeriesDataset` holds z-normalized series of shape (N, 1, T),
integer labels and their one-hot encoding. Train and test splits of one
archive dataset always share a label map.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from decolite.ucr.loaders import load_ucr_split
from decolite.ucr.preprocessing import STD_GUARD, handle_irregular
from decolite.utils.exceptions import DataError, UsageError

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6


def build_label_map(labels: Sequence[str]) -> Dict[str, int]:
    """Original label value -> class index, in ascending numeric order."""
    return {label: index for index, label in enumerate(sorted(set(labels), key=float))}


def one_hot(y, n_classes):
    encoded = np.zeros((len(y), n_classes))
    encoded[np.arange(len(y)), y] = 1.0
    return encoded


@dataclass(frozen=True)
class TimeSeriesDataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    split: str
    label_map: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.X.ndim != 3 or self.X.shape[1] != 1:
            raise DataError("dataset {0}: X must be (N, 1, T)".format(self.name))
        if len(self.X) != len(self.y):
            raise DataError("dataset {0}: X and y disagree in length".format(self.name))
        if np.isnan(self.X).any():
            raise DataError("dataset {0}: NaN after ingestion".format(self.name))
        for array in (self.X, self.y):
            array.setflags(write=False)

    def __len__(self):
        return len(self.y)

    @property
    def n_classes(self):
        return len(self.label_map)

    @property
    def length(self):
        return self.X.shape[2]

    @property
    def Y(self):
        return one_hot(self.y, self.n_classes)

    def class_counts(self):
        return np.bincount(self.y, minlength=self.n_classes)


def make_dataset(name, split, series, labels, label_map, length=None, normalize=True):
    """Runs preprocessing and encodes labels into a :class:`TimeSeriesDataset`."""
    unknown = sorted(set(labels) - set(label_map), key=float)
    if unknown:
        raise DataError(
            "dataset {0} ({1}): labels {2} do not occur in the train split".format(
                name, split, ", ".join(unknown)
            )
        )
    prepared = handle_irregular(series, length=length, normalize=normalize)
    X = np.stack(prepared)[:, np.newaxis, :]
    y = np.array([label_map[label] for label in labels], dtype=np.int64)
    return TimeSeriesDataset(name, X, y, split, dict(label_map))


def is_normalized(series, tolerance=NORMALIZATION_TOLERANCE):
    series = np.asarray(series)
    if series.std() < STD_GUARD:
        return bool(np.all(series == 0.0))
    return abs(series.mean()) < tolerance and abs(series.std() - 1.0) < tolerance


def load_ucr_dataset(root_dir, dataset_name, variable_length=True):
    """
    Loads both splits of an archive dataset. Series are normalized and padded
    to the longest train series; longer test series are truncated.
    """
    train_raw = load_ucr_split(root_dir, dataset_name, "train", variable_length)
    test_raw = load_ucr_split(root_dir, dataset_name, "test", variable_length)
    label_map = build_label_map(train_raw.labels)
    length = max(train_raw.lengths)
    train = make_dataset(dataset_name, "train", train_raw.series, train_raw.labels, label_map, length)
    test = make_dataset(dataset_name, "test", test_raw.series, test_raw.labels, label_map, length)
    logger.info(
        "loaded %s: %d train / %d test series, T=%d, %d classes",
        dataset_name,
        len(train),
        len(test),
        length,
        train.n_classes,
    )
    return train, test


def batches(dataset, batch_size: int, seed: int, epoch: int) -> List[np.ndarray]:
    """
    Index batches over a permutation seeded by ``(seed, epoch)``. The last
    batch may be smaller; a trailing singleton is folded into the previous
    batch so batch norm always sees at least two samples.
    """
    n_samples = dataset if isinstance(dataset, int) else len(dataset)
    if batch_size < 1:
        raise UsageError("batch_size must be at least 1")
    if n_samples < 2:
        raise DataError("cannot batch {0} sample(s); batch norm needs two".format(n_samples))
    order = np.random.default_rng([seed, epoch]).permutation(n_samples)
    chunks = [order[start : start + batch_size] for start in range(0, n_samples, batch_size)]
    if len(chunks[-1]) == 1:
        tail = chunks.pop()
        if chunks:
            chunks[-1] = np.concatenate([chunks[-1], tail])
        else:
            chunks = [tail]
    return chunks


def subset(dataset: TimeSeriesDataset, indices: Optional[np.ndarray] = None):
    """(X, Y) arrays for ``indices``, or the whole dataset."""
    if indices is None:
        return dataset.X, dataset.Y
    return dataset.X[indices], one_hot(dataset.y[indices], dataset.n_classes)
