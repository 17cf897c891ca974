"""Accuracy tables: classifiers x datasets, stored as CSV with datasets as rows."""
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from decolite.utils.exceptions import DataError, InputError, UsageError
from decolite.utils.files import read_csv, write_csv


@dataclass(frozen=True)
class ResultsTable:
    classifiers: List[str]
    datasets: List[str]
    acc: np.ndarray

    def __post_init__(self):
        acc = np.asarray(self.acc, dtype=np.float64)
        if acc.shape != (len(self.classifiers), len(self.datasets)):
            raise InputError(
                "accuracy matrix {0} does not match {1} classifiers x {2} datasets".format(
                    acc.shape, len(self.classifiers), len(self.datasets)
                )
            )
        if np.isnan(acc).any():
            raise InputError("results table has missing cells")
        if (acc < 0).any() or (acc > 1).any():
            raise InputError("accuracies must lie in [0, 1]")
        if len(set(self.classifiers)) != len(self.classifiers):
            raise InputError("duplicate classifier names")
        acc.setflags(write=False)
        object.__setattr__(self, "acc", acc)
        object.__setattr__(self, "classifiers", list(self.classifiers))
        object.__setattr__(self, "datasets", list(self.datasets))

    def row(self, classifier) -> np.ndarray:
        try:
            return self.acc[self.classifiers.index(classifier)]
        except ValueError:
            raise UsageError("no classifier named {0!r} in the table".format(classifier))

    def mean_accuracy(self, classifier) -> float:
        return float(self.row(classifier).mean())

    def to_csv(self, path):
        rows = (
            [dataset] + [float(value) for value in self.acc[:, column]]
            for column, dataset in enumerate(self.datasets)
        )
        return write_csv(path, ["dataset"] + self.classifiers, rows)

    @classmethod
    def from_csv(cls, path):
        try:
            header, rows = read_csv(path)
        except OSError as error:
            raise DataError("cannot read results table {0}: {1}".format(path, error))
        if len(header) < 2 or header[0] != "dataset":
            raise DataError("{0}: first header cell must be 'dataset'".format(path))
        datasets, columns = [], []
        for line_number, row in enumerate(rows, start=2):
            if len(row) != len(header) or any(cell.strip() == "" for cell in row):
                raise DataError("{0}:{1}: missing cells".format(path, line_number))
            datasets.append(row[0])
            try:
                columns.append([float(cell) for cell in row[1:]])
            except ValueError:
                raise DataError("{0}:{1}: non-numeric accuracy".format(path, line_number))
        try:
            return cls(header[1:], datasets, np.array(columns).T.reshape(len(header) - 1, len(datasets)))
        except InputError as error:
            raise DataError("{0}: {1}".format(path, error))

    @classmethod
    def from_runs(cls, records: Iterable[Tuple[str, str, float]]):
        """Averages repeated ``(classifier, dataset, accuracy)`` runs into one cell each."""
        cells = defaultdict(list)
        classifiers, datasets = [], []
        for classifier, dataset, value in records:
            if classifier not in classifiers:
                classifiers.append(classifier)
            if dataset not in datasets:
                datasets.append(dataset)
            cells[classifier, dataset].append(value)
        acc = np.full((len(classifiers), len(datasets)), np.nan)
        for (classifier, dataset), values in cells.items():
            acc[classifiers.index(classifier), datasets.index(dataset)] = np.mean(values)
        return cls(classifiers, datasets, acc)
