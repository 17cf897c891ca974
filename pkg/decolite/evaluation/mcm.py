"""
Multi-Comparison Matrix: classifiers ranked by mean accuracy, with the mean
difference, win/tie/loss counts and Wilcoxon p-value of every ordered pair.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List

import numpy as np

from decolite.evaluation.tables import ResultsTable
from decolite.evaluation.wilcoxon import WilcoxonResult, format_p_value, wilcoxon_signed_rank
from decolite.utils.exceptions import UsageError
from decolite.utils.files import write_csv, write_json

logger = logging.getLogger(__name__)

SIGNIFICANCE_LEVEL = 0.05

PAIRWISE_COLUMNS = (
    "classifier",
    "versus",
    "mean_difference",
    "wins",
    "ties",
    "losses",
    "p_value",
    "p_display",
    "significant",
)


@dataclass(frozen=True)
class WinTieLoss:
    wins: int
    ties: int
    losses: int

    def swapped(self):
        return WinTieLoss(self.losses, self.ties, self.wins)


def win_tie_loss(a, b) -> WinTieLoss:
    difference = np.asarray(a) - np.asarray(b)
    return WinTieLoss(
        int((difference > 0).sum()), int((difference == 0).sum()), int((difference < 0).sum())
    )


@dataclass
class OneVsOne:
    first: str
    second: str
    datasets: List[str]
    first_acc: np.ndarray
    second_acc: np.ndarray
    record: WinTieLoss
    test: WilcoxonResult

    def to_dict(self):
        return {
            "first": self.first,
            "second": self.second,
            "wins": self.record.wins,
            "ties": self.record.ties,
            "losses": self.record.losses,
            "wilcoxon": self.test.to_dict(),
            "pairs": [
                {"dataset": dataset, self.first: float(x), self.second: float(y)}
                for dataset, x, y in zip(self.datasets, self.first_acc, self.second_acc)
            ],
        }


def one_vs_one(table: ResultsTable, first, second) -> OneVsOne:
    """Head-to-head comparison of two classifiers of ``table``, dataset by dataset."""
    a, b = table.row(first), table.row(second)
    return OneVsOne(
        first, second, list(table.datasets), a, b, win_tie_loss(a, b), wilcoxon_signed_rank(a, b)
    )


@dataclass
class MCMReport:
    classifiers: List[str]
    mean_accuracy: Dict[str, float]
    mean_difference: Dict[str, Dict[str, float]] = field(default_factory=dict)
    win_tie_loss: Dict[str, Dict[str, WinTieLoss]] = field(default_factory=dict)
    p_values: Dict[str, Dict[str, float]] = field(default_factory=dict)
    degenerate: Dict[str, Dict[str, bool]] = field(default_factory=dict)

    def significant(self, a, b):
        return self.p_values[a][b] < SIGNIFICANCE_LEVEL

    def pairs(self):
        for a in self.classifiers:
            for b in self.classifiers:
                if a != b:
                    yield a, b

    def to_dict(self):
        return {
            "classifiers": self.classifiers,
            "significance_level": SIGNIFICANCE_LEVEL,
            "mean_accuracy": self.mean_accuracy,
            "pairwise": [
                {
                    "classifier": a,
                    "versus": b,
                    "mean_difference": self.mean_difference[a][b],
                    "wins": self.win_tie_loss[a][b].wins,
                    "ties": self.win_tie_loss[a][b].ties,
                    "losses": self.win_tie_loss[a][b].losses,
                    "p_value": self.p_values[a][b],
                    "p_display": format_p_value(self.p_values[a][b]),
                    "degenerate": self.degenerate[a][b],
                    "significant": self.significant(a, b),
                }
                for a, b in self.pairs()
            ],
        }

    def pairwise_rows(self):
        for entry in self.to_dict()["pairwise"]:
            yield [entry[column] for column in PAIRWISE_COLUMNS]

    def write(self, directory):
        """Writes ``mcm_report.json`` and the plot-ready ``mcm_pairwise.csv``."""
        directory = Path(directory)
        report = write_json(directory / "mcm_report.json", self.to_dict())
        pairwise = write_csv(directory / "mcm_pairwise.csv", PAIRWISE_COLUMNS, self.pairwise_rows())
        return [report, pairwise]


def mcm(table: ResultsTable) -> MCMReport:
    if len(table.classifiers) < 2:
        raise UsageError("a multi-comparison needs at least two classifiers")
    if not table.datasets:
        raise UsageError("the results table has no datasets")

    means = {name: table.mean_accuracy(name) for name in table.classifiers}
    ordered = sorted(table.classifiers, key=lambda name: (-means[name], table.classifiers.index(name)))
    report = MCMReport(ordered, {name: means[name] for name in ordered})
    for name in ordered:
        report.mean_difference[name] = {}
        report.win_tie_loss[name] = {}
        report.p_values[name] = {}
        report.degenerate[name] = {}

    for position, a in enumerate(ordered):
        for b in ordered[position + 1 :]:
            row_a, row_b = table.row(a), table.row(b)
            difference = float(np.mean(row_a - row_b))
            record = win_tie_loss(row_a, row_b)
            test = wilcoxon_signed_rank(row_a, row_b)
            report.mean_difference[a][b], report.mean_difference[b][a] = difference, -difference
            report.win_tie_loss[a][b], report.win_tie_loss[b][a] = record, record.swapped()
            report.p_values[a][b] = report.p_values[b][a] = test.p_value
            report.degenerate[a][b] = report.degenerate[b][a] = test.degenerate
    logger.debug("compared %d classifiers over %d datasets", len(ordered), len(table.datasets))
    return report
