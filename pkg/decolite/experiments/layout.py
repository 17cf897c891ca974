"""
On-disk layout of experiment outputs under one output directory::

    <out>/manifest.jsonl
    <out>/<dataset>/<kind>-<size>/ensemble.json
    <out>/<dataset>/<kind>-<size>/seed<k>/{model.npz,model_last.npz,train_log.csv}
    <out>/<dataset>/<kind>-<size>/diversity/...
    <out>/evaluation/results.csv
    <out>/mcm/{mcm_report.json,mcm_pairwise.csv}
    <out>/diversity/fid_comparison.{json,csv}
    <out>/smoke/smoke.csv

Single models trained by ``train`` live under ``base-1``.
"""
import re
from pathlib import Path
from typing import List, Tuple

from decolite.lite.checkpoints import load_checkpoint, save_checkpoint
from decolite.training.ensembles import BASE, DECORRELATED, normalize_kind
from decolite.training.logs import TrainLog
from decolite.utils.exceptions import DataError

KIND_DIRS = {BASE: "base", DECORRELATED: "deco"}
ENSEMBLE_DIR_PATTERN = re.compile(r"^(base|deco)-(\d+)$")

CHECKPOINT = "model.npz"
LAST_CHECKPOINT = "model_last.npz"
TRAIN_LOG = "train_log.csv"
ENSEMBLE_REPORT = "ensemble.json"
MANIFEST = "manifest.jsonl"


class RunLayout:
    def __init__(self, out_dir):
        self.out_dir = Path(out_dir)

    def __repr__(self):
        return "RunLayout({0!r})".format(str(self.out_dir))

    @property
    def manifest(self):
        return self.out_dir / MANIFEST

    def ensemble_dir(self, dataset, kind, size) -> Path:
        return self.out_dir / dataset / "{0}-{1}".format(KIND_DIRS[normalize_kind(kind)], size)

    def member_dir(self, dataset, kind, size, seed) -> Path:
        return self.ensemble_dir(dataset, kind, size) / "seed{0}".format(seed)

    def ensemble_report(self, dataset, kind, size) -> Path:
        return self.ensemble_dir(dataset, kind, size) / ENSEMBLE_REPORT

    def diversity_dir(self, dataset, kind, size) -> Path:
        return self.ensemble_dir(dataset, kind, size) / "diversity"

    @property
    def evaluation_dir(self):
        return self.out_dir / "evaluation"

    @property
    def results_csv(self):
        return self.evaluation_dir / "results.csv"

    @property
    def mcm_dir(self):
        return self.out_dir / "mcm"

    @property
    def comparison_dir(self):
        return self.out_dir / "diversity"

    @property
    def smoke_dir(self):
        return self.out_dir / "smoke"

    def find_runs(self, dataset) -> List[Tuple[str, int]]:
        """``(kind, size)`` of every run directory found for ``dataset``, sorted."""
        root = self.out_dir / dataset
        if not root.is_dir():
            return []
        runs = []
        for child in sorted(root.iterdir()):
            match = ENSEMBLE_DIR_PATTERN.match(child.name)
            if match and child.is_dir():
                runs.append((normalize_kind(match.group(1)), int(match.group(2))))
        return runs

    def member_seeds(self, dataset, kind, size) -> List[int]:
        directory = self.ensemble_dir(dataset, kind, size)
        seeds = []
        for child in directory.glob("seed*"):
            if (child / CHECKPOINT).exists() and child.name[4:].isdigit():
                seeds.append(int(child.name[4:]))
        return sorted(seeds)


def save_member(directory, model, log: TrainLog) -> List[Path]:
    directory = Path(directory)
    written = [save_checkpoint(model, directory / CHECKPOINT)]
    if log.last_state is not None:
        last = model.frozen_copy()
        last.restore(log.last_state)
        written.append(save_checkpoint(last, directory / LAST_CHECKPOINT))
    written.append(log.to_csv(directory / TRAIN_LOG))
    return written


def load_member(directory):
    """``(model, log)`` saved by :func:`save_member`; the log may be ``None``."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError("no trained model at {0}".format(directory))
    model = load_checkpoint(directory / CHECKPOINT)
    log_path = directory / TRAIN_LOG
    log = TrainLog.from_csv(log_path) if log_path.exists() else None
    return model, log
