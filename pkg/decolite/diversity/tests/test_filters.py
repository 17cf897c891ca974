import logging

import numpy as np
import pytest

from decolite.diversity.filters import filter_distance_matrix
from decolite.lite.models import init_model
from decolite.lite.tests.factories import TinyArchitectureFactory
from decolite.utils.exceptions import ConfigError, UsageError
from decolite.utils.files import read_csv


def test_single_model(tiny_model):
    matrix = filter_distance_matrix([tiny_model])
    assert matrix.d.shape == (2, 2)
    assert matrix.labels == [("model0", 0), ("model0", 1)]
    assert np.all(np.diag(matrix.d) == 0)
    assert matrix.d[0, 1] == matrix.d[1, 0] > 0


def test_identical_models_overlap(tiny_architecture):
    models = [init_model(tiny_architecture, seed=4, n_classes=2) for _ in range(2)]
    matrix = filter_distance_matrix(models, ["a", "b"])
    assert len(matrix) == 4
    assert np.all(np.diag(matrix.d[:2, 2:]) == 0)
    assert np.allclose(matrix.d, matrix.d.T)


def test_shape_follows_models(tiny_architecture):
    models = [init_model(tiny_architecture, seed=seed, n_classes=2) for seed in range(3)]
    assert filter_distance_matrix(models).d.shape == (6, 6)


def test_csv_labels(tiny_model, tmp_path):
    path = filter_distance_matrix([tiny_model], ["seed0"]).to_csv(tmp_path / "filters.csv")
    header, rows = read_csv(path)
    assert header == ["label", "seed0:0", "seed0:1"]
    assert [row[0] for row in rows] == ["seed0:0", "seed0:1"]


def test_non_default_shape_warns(tiny_model, caplog):
    with caplog.at_level(logging.WARNING, logger="decolite"):
        filter_distance_matrix([tiny_model])
    assert "not the default 32x20" in caplog.text


def test_mixed_shapes(tiny_model):
    wider = init_model(TinyArchitectureFactory(n_filters=3), seed=0, n_classes=2)
    with pytest.raises(ConfigError):
        filter_distance_matrix([tiny_model, wider])


def test_validation(tiny_model):
    with pytest.raises(UsageError):
        filter_distance_matrix([])
    with pytest.raises(UsageError):
        filter_distance_matrix([tiny_model], ["a", "b"])
