from typing import Sequence

import numpy as np

from decolite.lite.models import LiteModel
from decolite.utils.exceptions import ConfigError, DimensionError, UsageError


def average_probabilities(probabilities: Sequence[np.ndarray]) -> np.ndarray:
    """
    Arithmetic mean of per-model probability matrices. Values are sorted
    along the model axis before summing, so the result does not depend on
    the order of the models.
    """
    if len(probabilities) == 0:
        raise UsageError("nothing to average")
    stacked = np.stack([np.asarray(p, dtype=np.float64) for p in probabilities])
    return np.sort(stacked, axis=0).sum(axis=0) / len(probabilities)


def ensemble_predict(models: Sequence[LiteModel], X) -> np.ndarray:
    if len(models) == 0:
        raise UsageError("an ensemble needs at least one model")
    n_classes = {model.n_classes for model in models}
    if len(n_classes) != 1:
        raise ConfigError(
            "ensemble members disagree on the number of classes: {0}".format(sorted(n_classes))
        )
    return average_probabilities([model.predict_proba(X) for model in models])


def predicted_classes(probabilities) -> np.ndarray:
    # argmax returns the first maximum, so ties go to the lowest class index
    return np.asarray(probabilities).argmax(axis=1)


def accuracy(pred_classes, true_classes) -> float:
    pred_classes = np.asarray(pred_classes)
    true_classes = np.asarray(true_classes)
    if pred_classes.shape != true_classes.shape:
        raise DimensionError("predictions and labels differ in length")
    if pred_classes.size == 0:
        raise UsageError("accuracy of an empty prediction set")
    return float((pred_classes == true_classes).mean())


def ensemble_accuracy(models, dataset) -> float:
    return accuracy(predicted_classes(ensemble_predict(models, dataset.X)), dataset.y)
