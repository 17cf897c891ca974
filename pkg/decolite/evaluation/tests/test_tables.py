import numpy as np
import pytest

from decolite.evaluation.tables import ResultsTable
from decolite.utils.exceptions import DataError, InputError, UsageError
from decolite.utils.files import read_csv


@pytest.fixture
def hand_table():
    return ResultsTable(["b", "a"], ["d1", "d2", "d3"], [[0.8, 0.8, 0.6], [0.9, 0.8, 0.7]])


@pytest.fixture
def random_table():
    rng = np.random.default_rng(0)
    datasets = ["ds{0}".format(i) for i in range(6)]
    return ResultsTable(["x", "y", "z"], datasets, rng.uniform(0.5, 1.0, size=(3, 6)))


class TestResultsTable:
    def test_csv_round_trip(self, random_table, tmp_path):
        path = random_table.to_csv(tmp_path / "results.csv")
        restored = ResultsTable.from_csv(path)
        assert restored.classifiers == random_table.classifiers
        assert restored.datasets == random_table.datasets
        assert np.array_equal(restored.acc, random_table.acc)

    def test_datasets_are_rows(self, hand_table, tmp_path):
        header, rows = read_csv(hand_table.to_csv(tmp_path / "results.csv"))
        assert header == ["dataset", "b", "a"]
        assert rows[0] == ["d1", "0.8", "0.9"]

    def test_missing_cell(self, tmp_path):
        path = tmp_path / "results.csv"
        path.write_text("dataset,a,b\nd1,0.9,\n")
        with pytest.raises(DataError):
            ResultsTable.from_csv(path)

    def test_out_of_range(self):
        with pytest.raises(InputError):
            ResultsTable(["a"], ["d1"], [[1.2]])

    def test_from_runs_averages(self):
        table = ResultsTable.from_runs(
            [("LITE", "Coffee", 1.0), ("LITE", "Coffee", 0.9), ("LITETime-2", "Coffee", 1.0)]
        )
        assert table.row("LITE").tolist() == [pytest.approx(0.95)]
        assert table.classifiers == ["LITE", "LITETime-2"]

    def test_from_runs_with_gaps(self):
        with pytest.raises(InputError):
            ResultsTable.from_runs([("LITE", "Coffee", 1.0), ("LITETime-2", "Beef", 0.8)])

    def test_unknown_classifier(self, hand_table):
        with pytest.raises(UsageError):
            hand_table.row("c")

    def test_duplicate_classifiers(self):
        with pytest.raises(InputError):
            ResultsTable(["a", "a"], ["d1"], [[0.5], [0.6]])

    def test_bad_header(self, tmp_path):
        path = tmp_path / "results.csv"
        path.write_text("name,a\nd1,0.9\n")
        with pytest.raises(DataError):
            ResultsTable.from_csv(path)
