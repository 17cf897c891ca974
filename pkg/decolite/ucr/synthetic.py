"""
A tiny two-class problem for smoke runs and tests: noisy upward and
downward ramps. The label is the sign of the raw series mean, which the
ramp direction fixes, so normalization keeps the classes separable.
"""
import numpy as np

from decolite.ucr.datasets import build_label_map, make_dataset

SYNTHETIC_NAME = "synthetic-ramps"


def _draw(rng, n_samples, length, noise):
    directions = np.where(np.arange(n_samples) % 2 == 0, 1.0, -1.0)
    rng.shuffle(directions)
    ramp = np.linspace(0.0, 1.0, length)
    raw = directions[:, np.newaxis] * ramp[np.newaxis, :]
    raw = raw + noise * rng.normal(size=(n_samples, length))
    labels = ["1" if mean > 0 else "-1" for mean in raw.mean(axis=1)]
    return list(raw), labels


def synthetic_two_class(n_samples=32, length=16, seed=0, noise=0.05):
    """Returns ``(train, test)`` splits with ``n_samples`` series each."""
    rng = np.random.default_rng(seed)
    train_series, train_labels = _draw(rng, n_samples, length, noise)
    test_series, test_labels = _draw(rng, n_samples, length, noise)
    label_map = build_label_map(["-1", "1"])
    train = make_dataset(SYNTHETIC_NAME, "train", train_series, train_labels, label_map)
    test = make_dataset(SYNTHETIC_NAME, "test", test_series, test_labels, label_map)
    return train, test
