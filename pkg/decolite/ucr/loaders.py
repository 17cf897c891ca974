"""Readers for the tab-separated UCR 2018 archive layout."""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np

from decolite.utils.exceptions import DataError, UsageError

logger = logging.getLogger(__name__)

SPLITS = {"train": "TRAIN", "test": "TEST"}


@dataclass(frozen=True)
class RawSplit:
    name: str
    split: str
    labels: List[str]
    series: List[np.ndarray]

    def __len__(self):
        return len(self.labels)

    @property
    def lengths(self):
        return [len(values) for values in self.series]


def split_path(root_dir, dataset_name, split):
    if split not in SPLITS:
        raise UsageError("split must be one of {0}".format(", ".join(SPLITS)))
    return Path(root_dir) / dataset_name / "{0}_{1}.tsv".format(dataset_name, SPLITS[split])


def parse_label(text, where):
    try:
        float(text)
    except ValueError:
        raise DataError("{0}: label {1!r} is not numeric".format(where, text))
    return text.strip()


def parse_value(text):
    text = text.strip()
    if text == "" or text.lower() == "nan":
        return np.nan
    return float(text)


def load_ucr_split(root_dir, dataset_name, split, variable_length=False) -> RawSplit:
    """
    Reads ``<root>/<name>/<name>_{TRAIN|TEST}.tsv``: one series per line,
    the label first, then the values, tab-separated. Row order is kept.
    Rows of differing length are rejected unless ``variable_length`` is set.
    """
    path = split_path(root_dir, dataset_name, split)
    if not path.exists():
        raise DataError("missing UCR file {0}".format(path))

    labels, series = [], []
    with open(path, "r") as input_file:
        for line_number, line in enumerate(input_file, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            where = "{0}:{1}".format(path.name, line_number)
            fields = line.split("\t")
            if len(fields) < 2:
                raise DataError("{0}: a row needs a label and at least one value".format(where))
            labels.append(parse_label(fields[0], where))
            try:
                series.append(np.array([parse_value(v) for v in fields[1:]], dtype=np.float64))
            except ValueError:
                raise DataError("{0}: non-numeric value".format(where))

    if not series:
        raise DataError("{0} holds no series".format(path))
    lengths = {len(values) for values in series}
    if len(lengths) > 1 and not variable_length:
        raise DataError(
            "{0} has ragged rows (lengths {1}..{2})".format(path, min(lengths), max(lengths))
        )
    logger.debug("read %d series from %s", len(series), path)
    return RawSplit(dataset_name, split, labels, series)
