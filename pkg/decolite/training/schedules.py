import logging
import math

logger = logging.getLogger(__name__)

IMPROVEMENT_THRESHOLD = 1e-6


class ReduceLROnPlateau:
    """
    Multiplies the learning rate by ``factor`` once the monitored loss has
    not improved by more than ``threshold`` for ``patience`` epochs in a row.
    The rate never drops below ``min_lr`` and the wait counter restarts after
    every reduction.
    """

    def __init__(self, lr, factor=0.5, patience=50, min_lr=1e-4, threshold=IMPROVEMENT_THRESHOLD):
        self.lr = lr
        self.factor = factor
        self.patience = patience
        self.min_lr = min_lr
        self.threshold = threshold
        self.best = math.inf
        self.wait = 0
        self.reductions = 0

    @classmethod
    def from_config(cls, config):
        return cls(config.lr, config.plateau_factor, config.plateau_patience, config.min_lr)

    def improved(self, loss):
        return loss < self.best - self.threshold

    def step(self, epoch_loss, epoch=None):
        if self.improved(epoch_loss):
            self.best = epoch_loss
            self.wait = 0
            return self.lr
        self.wait += 1
        if self.wait >= self.patience:
            self.wait = 0
            new_lr = max(self.lr * self.factor, self.min_lr)
            if new_lr < self.lr:
                logger.info(
                    "epoch %s: reducing learning rate from %g to %g", epoch, self.lr, new_lr
                )
                self.reductions += 1
            self.lr = new_lr
        return self.lr


def reduce_lr_on_plateau(state: ReduceLROnPlateau, epoch_loss) -> float:
    return state.step(epoch_loss)
