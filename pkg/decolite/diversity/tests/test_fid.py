import numpy as np
import pytest

from decolite.diversity.features import FeatureStats
from decolite.diversity.fid import fid, fid_comparison
from decolite.utils.exceptions import DimensionError, InputError, UsageError


def gaussian(mu, sigma, model_id=""):
    return FeatureStats(model_id, np.atleast_1d(np.asarray(mu, dtype=float)), np.atleast_2d(sigma), 10)


def random_stats(seed, dimension=4):
    rng = np.random.default_rng(seed)
    features = rng.normal(size=(50, dimension))
    return gaussian(features.mean(axis=0), np.cov(features, rowvar=False))


def test_identical_distributions():
    stats = random_stats(0)
    assert fid(stats, stats) == pytest.approx(0.0, abs=1e-8)


def test_one_dimensional():
    assert fid(gaussian([0.0], [[1.0]]), gaussian([1.0], [[4.0]])) == pytest.approx(2.0)


def test_symmetric():
    a, b = random_stats(1), random_stats(2)
    assert fid(a, b) == pytest.approx(fid(b, a), rel=1e-9)
    assert fid(a, b) > 0


def test_diagonal_closed_form():
    sigma_a, sigma_b = np.array([1.0, 2.0, 0.5]), np.array([3.0, 0.25, 0.5])
    mu_a, mu_b = np.array([0.0, 1.0, 2.0]), np.array([1.0, 1.0, 0.0])
    expected = ((mu_a - mu_b) ** 2).sum() + ((np.sqrt(sigma_a) - np.sqrt(sigma_b)) ** 2).sum()
    value = fid(gaussian(mu_a, np.diag(sigma_a)), gaussian(mu_b, np.diag(sigma_b)))
    assert value == pytest.approx(expected, abs=1e-8)


def test_asymmetric_covariance():
    with pytest.raises(InputError):
        fid(gaussian([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]]), gaussian([0.0, 0.0], np.eye(2)))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        fid(random_stats(0, 3), random_stats(0, 4))


def test_fid_comparison():
    comparison = fid_comparison([("d1", 1.0, 2.0), ("d2", 1.0, 3.0), ("d3", 2.0, 1.0), ("d4", 1.0, 1.0)])
    assert comparison.deco_wins == 2
    assert comparison.base_wins == 1
    assert comparison.ties == 1
    assert comparison.test.n == 3
    assert comparison.rows()[0] == ["d1", 1.0, 2.0]
    assert comparison.to_dict()["deco_higher"] == 2


def test_fid_comparison_empty():
    with pytest.raises(UsageError):
        fid_comparison([])
