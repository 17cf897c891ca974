from pathlib import Path

import pytest

from decolite.lite.models import init_model
from decolite.lite.tests.factories import TinyArchitectureFactory
from decolite.training.tests.factories import TrainConfigFactory
from decolite.ucr.synthetic import synthetic_two_class
from decolite.ucr.tests.factories import write_ucr_split


@pytest.fixture(autouse=True)
def output_dir(settings, tmp_path) -> Path:
    settings.DECO_OUTPUT_DIR = str(tmp_path / "runs")
    settings.DECO_DATA_ROOT = None
    return Path(settings.DECO_OUTPUT_DIR)


@pytest.fixture(scope="session")
def synthetic():
    return synthetic_two_class()


@pytest.fixture
def tiny_architecture():
    return TinyArchitectureFactory()


@pytest.fixture
def tiny_model(tiny_architecture):
    return init_model(tiny_architecture, seed=0, n_classes=2)


@pytest.fixture
def train_config():
    return TrainConfigFactory()


@pytest.fixture
def ucr_root(tmp_path) -> Path:
    """A two-dataset archive: ``Toy`` (equal lengths) and ``Ragged`` (8 and 10)."""
    root = tmp_path / "UCRArchive_2018"
    write_ucr_split(
        root,
        "Toy",
        "TRAIN",
        [("1", [0.1, 0.2, 0.3, 0.4]), ("2", [0.4, 0.3, 0.2, 0.1]), ("1", [1.0, 2.0, 3.0, 5.0])],
    )
    write_ucr_split(
        root,
        "Toy",
        "TEST",
        [("2", [3.0, 2.0, 1.0, 0.0]), ("1", [0.0, 1.0, 1.0, 2.0, 9.0])],
    )
    write_ucr_split(
        root,
        "Ragged",
        "TRAIN",
        [("-1", list(range(8))), ("1", [float(v) for v in range(10, 0, -1)])],
    )
    write_ucr_split(root, "Ragged", "TEST", [("1", [1.0, "NaN", 3.0])])
    return root
