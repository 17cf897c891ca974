"""
Frechet distance between two Gaussian feature summaries:

    |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2))

The trace of the product square root is taken from the eigenvalues of the
symmetric matrix S_a^(1/2) S_b S_a^(1/2), which shares them with S_a S_b.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from decolite.diversity.features import FeatureStats
from decolite.evaluation.wilcoxon import WilcoxonResult, wilcoxon_signed_rank
from decolite.utils.exceptions import DimensionError, InputError, NumericError, UsageError

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-9
EIGENVALUE_FLOOR = 1e-10
NEGATIVE_TOLERANCE = 1e-8


def _check_symmetric(sigma, what):
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise DimensionError("{0} covariance must be square".format(what))
    if np.abs(sigma - sigma.T).max() > SYMMETRY_TOLERANCE:
        raise InputError("{0} covariance is not symmetric".format(what))


def psd_sqrt(sigma):
    eigenvalues, eigenvectors = np.linalg.eigh((sigma + sigma.T) / 2.0)
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    return (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T


def trace_sqrt_product(sigma_a, sigma_b):
    root_a = psd_sqrt(sigma_a)
    product = root_a @ sigma_b @ root_a
    eigenvalues = np.linalg.eigvalsh((product + product.T) / 2.0)
    eigenvalues = np.where(eigenvalues < EIGENVALUE_FLOOR, 0.0, eigenvalues)
    return float(np.sqrt(eigenvalues).sum())


def fid(stats_a: FeatureStats, stats_b: FeatureStats) -> float:
    if stats_a.mu.shape != stats_b.mu.shape or stats_a.sigma.shape != stats_b.sigma.shape:
        raise DimensionError(
            "feature dimensions differ: {0} vs {1}".format(stats_a.dimension, stats_b.dimension)
        )
    _check_symmetric(stats_a.sigma, stats_a.model_id or "first")
    _check_symmetric(stats_b.sigma, stats_b.model_id or "second")

    offset = stats_a.mu - stats_b.mu
    distance = (
        float(offset @ offset)
        + float(np.trace(stats_a.sigma))
        + float(np.trace(stats_b.sigma))
        - 2.0 * trace_sqrt_product(stats_a.sigma, stats_b.sigma)
    )
    if distance < 0:
        if distance < -NEGATIVE_TOLERANCE:
            raise NumericError("negative Frechet distance {0}".format(distance))
        distance = 0.0
    return distance


@dataclass
class FIDComparison:
    """Per-dataset FID of base and decorrelated models against the shared reference."""

    datasets: List[str] = field(default_factory=list)
    reference_vs_base: List[float] = field(default_factory=list)
    reference_vs_deco: List[float] = field(default_factory=list)
    test: Optional[WilcoxonResult] = None

    @property
    def deco_wins(self):
        return sum(deco > base for base, deco in zip(self.reference_vs_base, self.reference_vs_deco))

    @property
    def base_wins(self):
        return sum(base > deco for base, deco in zip(self.reference_vs_base, self.reference_vs_deco))

    @property
    def ties(self):
        return len(self.datasets) - self.deco_wins - self.base_wins

    def rows(self):
        return [
            [dataset, base, deco]
            for dataset, base, deco in zip(self.datasets, self.reference_vs_base, self.reference_vs_deco)
        ]

    def to_dict(self):
        return {
            "datasets": self.datasets,
            "reference_vs_base": self.reference_vs_base,
            "reference_vs_deco": self.reference_vs_deco,
            "deco_higher": self.deco_wins,
            "base_higher": self.base_wins,
            "ties": self.ties,
            "wilcoxon": self.test.to_dict() if self.test is not None else None,
        }


def fid_comparison(results: List[Tuple[str, float, float]]) -> FIDComparison:
    """``results`` holds ``(dataset, fid(reference, base), fid(reference, deco))`` triples."""
    if not results:
        raise UsageError("no datasets to compare")
    comparison = FIDComparison()
    for dataset, base, deco in results:
        comparison.datasets.append(dataset)
        comparison.reference_vs_base.append(float(base))
        comparison.reference_vs_deco.append(float(deco))
    comparison.test = wilcoxon_signed_rank(comparison.reference_vs_deco, comparison.reference_vs_base)
    logger.info(
        "FID over %d datasets: deco higher on %d, base higher on %d (p=%s)",
        len(comparison.datasets),
        comparison.deco_wins,
        comparison.base_wins,
        comparison.test.p_display,
    )
    return comparison
