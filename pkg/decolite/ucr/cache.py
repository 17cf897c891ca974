"""Normalized-dataset cache: both splits in one ``.npz`` with a checksum."""
import json
import logging
import zipfile
from pathlib import Path

import numpy as np

from decolite.ucr.datasets import TimeSeriesDataset
from decolite.utils.exceptions import DataError
from decolite.utils.files import array_digest, save_npz

logger = logging.getLogger(__name__)

META_KEY = "__meta__"


def _arrays(train, test):
    return [
        ("train/X", train.X),
        ("train/y", train.y),
        ("test/X", test.X),
        ("test/y", test.y),
    ]


def save_dataset_cache(train: TimeSeriesDataset, test: TimeSeriesDataset, path):
    arrays = _arrays(train, test)
    meta = {
        "name": train.name,
        "label_map": train.label_map,
        "checksum": array_digest(arrays),
    }
    path = save_npz(path, arrays + [(META_KEY, np.array(json.dumps(meta, sort_keys=True)))])
    logger.debug("cached %s at %s", train.name, path)
    return path


def load_dataset_cache(path):
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as archive:
            meta = json.loads(str(archive[META_KEY]))
            arrays = {key: archive[key] for key in archive.files if key != META_KEY}
    except (OSError, EOFError, ValueError, KeyError, zipfile.BadZipFile) as error:
        raise DataError("dataset cache {0} is unreadable: {1}".format(path, error))

    if not isinstance(meta, dict) or any(key not in meta for key in ("name", "label_map", "checksum")):
        raise DataError("dataset cache {0} has malformed metadata".format(path))
    try:
        train = TimeSeriesDataset(meta["name"], arrays["train/X"], arrays["train/y"], "train", meta["label_map"])
        test = TimeSeriesDataset(meta["name"], arrays["test/X"], arrays["test/y"], "test", meta["label_map"])
    except KeyError as error:
        raise DataError("dataset cache {0} lacks entry {1}".format(path, error))
    if array_digest(_arrays(train, test)) != meta["checksum"]:
        raise DataError("dataset cache {0} failed its checksum".format(path))
    return train, test


def cached_dataset(loader, cache_path, *args, **kwargs):
    """``loader(*args, **kwargs)`` behind a cache file; a bad cache is rebuilt."""
    cache_path = Path(cache_path)
    if cache_path.exists():
        try:
            return load_dataset_cache(cache_path)
        except DataError as error:
            logger.warning("%s; rebuilding", error)
    train, test = loader(*args, **kwargs)
    save_dataset_cache(train, test, cache_path)
    return train, test
