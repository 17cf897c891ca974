"""
Ensemble orchestration.

``LITETime-N`` is N base models trained independently with distinct seeds.
``Deco-LITETime-N`` starts from a reference base model and adds N-1 models,
each decorrelated against every model trained before it; member k is seeded
like base member k.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from decolite.lite.models import LiteModel
from decolite.training.config import TrainConfig
from decolite.training.logs import TrainLog
from decolite.training.trainers import train_base, train_decorrelated
from decolite.ucr.datasets import TimeSeriesDataset
from decolite.utils.exceptions import UsageError

logger = logging.getLogger(__name__)

BASE = "base"
DECORRELATED = "decorrelated"
KINDS = (BASE, DECORRELATED)
KIND_ALIASES = {"base": BASE, "deco": DECORRELATED, "decorrelated": DECORRELATED}

REFERENCE = "reference"

PAPER_SIZES = range(2, 6)


def normalize_kind(kind):
    try:
        return KIND_ALIASES[kind]
    except KeyError:
        raise UsageError("ensemble kind must be base or deco, got {0!r}".format(kind))


def ensemble_name(kind, size):
    prefix = "Deco-LITETime" if normalize_kind(kind) == DECORRELATED else "LITETime"
    return "{0}-{1}".format(prefix, size)


def default_seeds(size):
    return list(range(size))


@dataclass
class EnsembleMember:
    role: str
    seed: int
    model: LiteModel
    log: TrainLog


@dataclass
class EnsembleRun:
    dataset: str
    kind: str
    size: int
    config: TrainConfig
    members: List[EnsembleMember] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.models)

    def __getitem__(self, index):
        return self.members[index].model

    @property
    def name(self):
        return ensemble_name(self.kind, self.size)

    @property
    def models(self):
        return [member.model for member in self.members]

    @property
    def seeds(self):
        return [member.seed for member in self.members]

    def metadata(self):
        return {
            "dataset": self.dataset,
            "kind": self.kind,
            "size": self.size,
            "name": self.name,
            "seeds": self.seeds,
            "roles": [member.role for member in self.members],
            "best_epochs": [member.log.best_epoch for member in self.members],
            "checksums": [member.model.checksum() for member in self.members],
            "config": self.config.to_dict(),
        }


def build_ensemble(
    dataset: TimeSeriesDataset,
    config: TrainConfig,
    size: int,
    kind: str,
    seeds: Optional[Sequence[int]] = None,
    reference: Optional[Tuple[LiteModel, TrainLog]] = None,
) -> EnsembleRun:
    """
    Trains an ensemble of ``size`` models. For the decorrelated kind an
    already trained ``reference`` (model, log) may be passed so the same
    reference is shared across ensemble sizes.
    """
    kind = normalize_kind(kind)
    if size < 2:
        raise UsageError("an ensemble needs at least two models")
    if size not in PAPER_SIZES:
        logger.warning("ensemble size %d is outside the studied range 2..5", size)
    seeds = list(seeds) if seeds is not None else default_seeds(size)
    if len(seeds) != size:
        raise UsageError("{0} seeds given for an ensemble of {1}".format(len(seeds), size))
    if len(set(seeds)) != size:
        raise UsageError("ensemble seeds must be distinct")

    run = EnsembleRun(dataset.name, kind, size, config)
    for position, seed in enumerate(seeds):
        member_config = config.with_seed(seed)
        logger.info("%s on %s: training member %d (seed %d)", run.name, dataset.name, position + 1, seed)
        if kind == BASE:
            model, log = train_base(dataset, member_config)
            role = BASE
        elif position == 0:
            if reference is not None:
                model, log = reference
                if model.seed != seed:
                    raise UsageError(
                        "reference model has seed {0}, expected {1}".format(model.seed, seed)
                    )
            else:
                model, log = train_base(dataset, member_config)
            role = REFERENCE
        else:
            predecessors = [member.model.frozen_copy() for member in run.members]
            model, log = train_decorrelated(dataset, member_config, predecessors)
            role = DECORRELATED
        run.members.append(EnsembleMember(role, seed, model, log))
        logger.info(
            "%s on %s: member %d done, final loss %.6f",
            run.name,
            dataset.name,
            position + 1,
            log.last.total_loss,
        )
    return run
