"""
Epoch/batch training loops for base and decorrelated LITE models.

A base model minimizes cross-entropy only. A decorrelated model adds the
sequential orthogonality term against the feature maps of every frozen
predecessor. Those eval-mode feature maps are computed once per run and
sliced per batch while they fit in ``FEATURE_CACHE_BYTES``; larger runs
recompute them batch by batch.
"""
import logging
import math
import time
from typing import List, Sequence, Tuple

import numpy as np

from decolite.autodiff import functional as F
from decolite.autodiff.graph import Graph
from decolite.autodiff.optim import Adam
from decolite.autodiff.tensor import Tensor
from decolite.lite.models import LiteModel, init_model
from decolite.training.config import LAST_EPOCH, TrainConfig
from decolite.training.logs import EpochRecord, TrainLog
from decolite.training.losses import sequential_orth_loss, total_loss
from decolite.training.schedules import ReduceLROnPlateau
from decolite.ucr.datasets import TimeSeriesDataset, batches, subset
from decolite.utils.exceptions import ConfigError, DivergenceError, NumericError, StateError, UsageError

logger = logging.getLogger(__name__)

FEATURE_CACHE_BYTES = 512 * 2**20


def evaluate_features(model: LiteModel, X, chunk_size=256) -> np.ndarray:
    """Eval-mode feature maps of ``model`` for every series in ``X``."""
    return model.features(X, chunk_size=chunk_size)


def model_accuracy(model: LiteModel, dataset: TimeSeriesDataset) -> float:
    predictions = model.predict_proba(dataset.X).argmax(axis=1)
    return float((predictions == dataset.y).mean())


class PredecessorFeatures:
    """Feature maps of frozen predecessors for any batch of training indices."""

    def __init__(self, prev_models: Sequence[LiteModel], dataset: TimeSeriesDataset, limit=None):
        limit = FEATURE_CACHE_BYTES if limit is None else limit
        self.prev_models = list(prev_models)
        self.dataset = dataset
        n_samples, _, length = dataset.X.shape
        size = 8 * n_samples * length * sum(previous.config.n_filters for previous in self.prev_models)
        self.cached = size <= limit
        if self.cached:
            self.maps = [evaluate_features(previous, dataset.X) for previous in self.prev_models]
        else:
            logger.debug("predecessor features need %d bytes; computing them per batch", size)

    def __bool__(self):
        return bool(self.prev_models)

    def batch(self, indices) -> List[Tensor]:
        if self.cached:
            return [Tensor.wrap(maps[indices]) for maps in self.maps]
        X = self.dataset.X[indices]
        return [Tensor.wrap(evaluate_features(previous, X)) for previous in self.prev_models]


def _check_predecessors(config, dataset, prev_models):
    for index, previous in enumerate(prev_models):
        if previous.config.n_filters != config.architecture.n_filters:
            raise ConfigError(
                "predecessor {0} has {1} feature channels, the new model {2}".format(
                    index, previous.config.n_filters, config.architecture.n_filters
                )
            )
        if previous.n_classes != dataset.n_classes:
            raise ConfigError("predecessor {0} was trained on a different label set".format(index))


def _run(dataset: TimeSeriesDataset, config: TrainConfig, prev_models: Sequence[LiteModel]):
    model = init_model(config.architecture, config.seed, dataset.n_classes)
    optimizer = Adam(model.parameters, lr=config.lr)
    scheduler = ReduceLROnPlateau.from_config(config)
    prev_features = PredecessorFeatures(prev_models, dataset)
    log = TrainLog(n_predecessors=len(prev_models))
    best_loss, best_state = math.inf, None
    report_every = max(1, config.epochs // 10)

    for epoch in range(1, config.epochs + 1):
        started = time.perf_counter()
        lr = optimizer.lr
        ce_sum = orth_sum = loss_sum = 0.0
        correct = 0
        for indices in batches(dataset, config.batch_size, config.seed, epoch):
            X, Y = subset(dataset, indices)
            previous_maps = prev_features.batch(indices) if prev_features else None
            optimizer.zero_grad()
            try:
                with Graph() as graph:
                    logits, features = model(Tensor(X), F.TRAIN)
                    ce = F.softmax_cross_entropy(logits, Y)
                    if prev_features:
                        orth = sequential_orth_loss(
                            features,
                            previous_maps,
                            config.orth_normalization,
                            config.include_diagonal,
                        )
                        loss = total_loss(ce, orth, config.alpha)
                    else:
                        orth, loss = None, ce
            except NumericError as error:
                raise DivergenceError(str(error), epoch) from error
            if not np.isfinite(loss.item()):
                raise DivergenceError("non-finite training loss", epoch)
            graph.backward(loss)
            optimizer.step()

            weight = len(indices)
            ce_sum += ce.item() * weight
            orth_sum += (orth.item() if orth is not None else 0.0) * weight
            loss_sum += loss.item() * weight
            correct += int((logits.data.argmax(axis=1) == dataset.y[indices]).sum())

        n_samples = len(dataset)
        epoch_loss = loss_sum / n_samples
        optimizer.lr = scheduler.step(epoch_loss, epoch)
        log.append(
            EpochRecord(
                epoch=epoch,
                lr=lr,
                ce_loss=ce_sum / n_samples,
                orth_loss=orth_sum / n_samples,
                total_loss=epoch_loss,
                train_acc=correct / n_samples,
                seconds=time.perf_counter() - started,
            )
        )
        if epoch_loss < best_loss:
            best_loss, best_state = epoch_loss, model.snapshot()
            log.best_epoch = epoch
        if epoch % report_every == 0 or epoch == config.epochs:
            logger.info(
                "%s seed %d epoch %d/%d: loss %.6f acc %.4f lr %g",
                dataset.name,
                config.seed,
                epoch,
                config.epochs,
                epoch_loss,
                correct / n_samples,
                lr,
            )

    log.last_state = model.snapshot()
    if config.checkpoint_policy != LAST_EPOCH:
        model.restore(best_state)
    return model, log


def train_base(dataset: TimeSeriesDataset, config: TrainConfig) -> Tuple[LiteModel, TrainLog]:
    """Cross-entropy training; the returned model is the best-train-loss checkpoint."""
    return _run(dataset, config, ())


def train_decorrelated(
    dataset: TimeSeriesDataset, config: TrainConfig, prev_models: List[LiteModel]
) -> Tuple[LiteModel, TrainLog]:
    """
    Trains a model seeded like its base twin against the features of every
    model in ``prev_models``, which are only ever read.
    """
    if not prev_models:
        raise UsageError("decorrelated training needs at least one predecessor")
    _check_predecessors(config, dataset, prev_models)
    checksums = [previous.checksum() for previous in prev_models]
    model, log = _run(dataset, config, prev_models)
    if [previous.checksum() for previous in prev_models] != checksums:
        raise StateError("a predecessor changed during decorrelated training")
    return model, log
