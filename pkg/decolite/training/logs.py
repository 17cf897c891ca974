from dataclasses import astuple, dataclass, field
from typing import Dict, List, Optional

import numpy as np

from decolite.utils.exceptions import DataError, StateError
from decolite.utils.files import read_csv, write_csv

TRAIN_LOG_COLUMNS = ("epoch", "lr", "ce_loss", "orth_loss", "total_loss", "train_acc", "seconds")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    lr: float
    ce_loss: float
    orth_loss: float
    total_loss: float
    train_acc: float
    seconds: float


@dataclass
class TrainLog:
    """One record per completed epoch, epochs counted from 1."""

    records: List[EpochRecord] = field(default_factory=list)
    n_predecessors: int = 0
    best_epoch: Optional[int] = None
    # model state after the final epoch, kept next to the best-loss checkpoint
    last_state: Optional[Dict[str, np.ndarray]] = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def append(self, record: EpochRecord):
        if self.records and record.epoch <= self.records[-1].epoch:
            raise StateError(
                "epoch {0} logged after epoch {1}".format(record.epoch, self.records[-1].epoch)
            )
        self.records.append(record)

    @property
    def last(self):
        return self.records[-1] if self.records else None

    def best(self):
        """Record with the lowest total loss; the earliest one on ties."""
        return min(self.records, key=lambda record: (record.total_loss, record.epoch))

    def column(self, name):
        return [getattr(record, name) for record in self.records]

    def to_csv(self, path):
        return write_csv(path, TRAIN_LOG_COLUMNS, (astuple(record) for record in self.records))

    @classmethod
    def from_csv(cls, path):
        header, rows = read_csv(path)
        if tuple(header) != TRAIN_LOG_COLUMNS:
            raise DataError("{0} is not a training log".format(path))
        log = cls()
        for row in rows:
            log.append(EpochRecord(int(row[0]), *(float(value) for value in row[1:])))
        return log
