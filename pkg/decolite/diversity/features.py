"""Gaussian summaries of a model's feature distribution."""
from dataclasses import dataclass

import numpy as np

from decolite.lite.models import LiteModel
from decolite.training.trainers import evaluate_features
from decolite.utils.exceptions import UsageError

GAP = "gap"
TIMESTEPS = "timesteps"
POOLINGS = (GAP, TIMESTEPS)


@dataclass(frozen=True)
class FeatureStats:
    model_id: str
    mu: np.ndarray
    sigma: np.ndarray
    n_samples: int

    @property
    def dimension(self):
        return self.mu.shape[0]

    def to_dict(self):
        return {
            "model_id": self.model_id,
            "n_samples": self.n_samples,
            "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
        }

    @classmethod
    def from_dict(cls, values):
        return cls(
            values["model_id"],
            np.array(values["mu"], dtype=np.float64),
            np.array(values["sigma"], dtype=np.float64),
            int(values["n_samples"]),
        )


def stats_from_features(features, model_id="") -> FeatureStats:
    """Sample mean and unbiased covariance of an (N, D) feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise UsageError("features must be an (N, D) matrix")
    if features.shape[0] < 2:
        raise UsageError("feature statistics need at least two samples")
    mu = features.mean(axis=0)
    sigma = np.atleast_2d(np.cov(features, rowvar=False))
    return FeatureStats(model_id, mu, sigma, features.shape[0])


def pooled_features(model: LiteModel, X, pooling=GAP) -> np.ndarray:
    """
    ``gap`` averages each final feature map over time, one vector per
    series; ``timesteps`` keeps every time step as its own sample.
    """
    if pooling not in POOLINGS:
        raise UsageError("pooling must be one of {0}".format(", ".join(POOLINGS)))
    maps = evaluate_features(model, X)
    if pooling == GAP:
        return maps.mean(axis=2)
    return maps.transpose(0, 2, 1).reshape(-1, maps.shape[1])


def feature_statistics(model: LiteModel, X, model_id=None, pooling=GAP) -> FeatureStats:
    if len(X) < 2:
        raise UsageError("feature statistics need at least two series")
    if model_id is None:
        model_id = "seed{0}".format(model.seed)
    return stats_from_features(pooled_features(model, X, pooling), model_id)
