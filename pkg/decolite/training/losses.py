"""
Feature orthogonality losses.

For each sample, the cosine similarity between every channel row of the new
model's feature map and every channel row of a predecessor's feature map
forms a C x C matrix; the loss is the mean over the batch of the summed
absolute off-diagonal entries. ``mean-offdiag`` additionally divides by the
number of off-diagonal pairs.
"""
import numpy as np

from decolite.autodiff import functional as F
from decolite.autodiff.tensor import Tensor, as_tensor
from decolite.training.config import MEAN_OFFDIAG, ORTH_NORMALIZATIONS, RAW_SUM
from decolite.utils.exceptions import ConfigError, DimensionError, UsageError


def orthogonality_loss(f_deco, f_base, mode=MEAN_OFFDIAG, include_diagonal=False) -> Tensor:
    if mode not in ORTH_NORMALIZATIONS:
        raise ConfigError("unknown orthogonality normalization {0!r}".format(mode))
    if f_deco.shape != f_base.shape:
        raise DimensionError(
            "feature maps differ in shape: {0} vs {1}".format(f_deco.shape, f_base.shape)
        )
    if f_deco.ndim != 3:
        raise DimensionError("feature maps must be (B, C, T), got {0}".format(f_deco.shape))

    batch, channels, _ = f_deco.shape
    if channels < 1:
        raise UsageError("feature maps need at least one channel")
    pairs = channels * channels if include_diagonal else channels * (channels - 1)
    if pairs == 0:
        return Tensor(0.0)

    similarity = F.absolute(F.cosine_similarity_matrix(f_deco, f_base))
    if not include_diagonal:
        mask = np.broadcast_to(1.0 - np.eye(channels), similarity.shape).copy()
        similarity = F.mul(similarity, Tensor.wrap(mask))
    per_sample = 1.0 / batch
    if mode == MEAN_OFFDIAG:
        per_sample /= pairs
    return F.scale(F.sum_all(similarity), per_sample)


def sequential_orth_loss(f_new, prev_features, mode=MEAN_OFFDIAG, include_diagonal=False):
    """Mean of :func:`orthogonality_loss` against every predecessor's features."""
    if not prev_features:
        raise UsageError("sequential orthogonality needs at least one predecessor")
    for features in prev_features:
        if features.shape != f_new.shape:
            raise ConfigError(
                "predecessor features {0} do not match {1}".format(features.shape, f_new.shape)
            )
    losses = [orthogonality_loss(f_new, f, mode, include_diagonal) for f in prev_features]
    if len(losses) == 1:
        return losses[0]
    total = losses[0]
    for loss in losses[1:]:
        total = F.add(total, loss)
    return F.scale(total, 1.0 / len(losses))


def total_loss(ce, orth, alpha) -> Tensor:
    """alpha * ce + (1 - alpha) * orth."""
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError("alpha must lie in [0, 1], got {0}".format(alpha))
    return F.add(F.scale(as_tensor(ce), alpha), F.scale(as_tensor(orth), 1.0 - alpha))


__all__ = ["orthogonality_loss", "sequential_orth_loss", "total_loss", "MEAN_OFFDIAG", "RAW_SUM"]
