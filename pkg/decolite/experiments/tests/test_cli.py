import json
from io import StringIO

import numpy as np
import pytest

from decolite.experiments.cli import dispatch, usage
from decolite.experiments.layout import RunLayout
from decolite.experiments.manifests import read_manifests
from decolite.lite import checkpoints
from decolite.training.ensembles import BASE, DECORRELATED
from decolite.utils.exceptions import DataError
from decolite.utils.files import read_csv, save_npz


def run(*argv):
    stdout, stderr = StringIO(), StringIO()
    code = dispatch([str(arg) for arg in argv], stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("config") / "train.env"
    path.write_text("n_filters=2\nepochs=2\nbatch_size=16\n")
    return path


@pytest.fixture(scope="module")
def trained(tmp_path_factory, small_config):
    """Output directory holding single models and both 2-member ensembles on the synthetic data."""
    out = tmp_path_factory.mktemp("runs")
    common = ("--dataset", "synthetic", "--out", out, "--config", small_config)
    assert run("train", *common, "--seeds", "0,1")[0] == 0
    assert run("ensemble", *common, "--kind", "base", "--size", 2)[0] == 0
    assert run("ensemble", *common, "--kind", "deco", "--size", 2)[0] == 0
    return out


class TestDispatch:
    def test_unknown_command(self):
        code, _, stderr = run("fit")
        assert code == 1
        assert "unknown command: fit" in stderr
        assert usage() in stderr

    def test_no_command(self):
        assert run()[0] == 1

    def test_help(self):
        assert run("--help")[0] == 0

    def test_command_help(self, capsys):
        assert run("train", "--help")[0] == 0
        assert "--dataset" in capsys.readouterr().out

    def test_bad_flag(self):
        code, _, stderr = run("train", "--dataset", "synthetic", "--wings", "2")
        assert code == 1
        assert "--wings" in stderr

    def test_missing_required_flag(self):
        assert run("train")[0] == 1

    def test_bad_seeds(self):
        assert run("train", "--dataset", "synthetic", "--seeds", "a,b")[0] == 1

    def test_missing_data_root(self):
        code, _, stderr = run("train", "--dataset", "Coffee")
        assert code == 1
        assert "DECO_DATA_ROOT" in stderr

    def test_nonexistent_data_root(self, tmp_path):
        code, _, _ = run("train", "--dataset", "Coffee", "--data-root", tmp_path / "missing")
        assert code == 2

    def test_unknown_dataset(self, ucr_root):
        code, _, _ = run("train", "--dataset", "Coffee", "--data-root", ucr_root)
        assert code == 2

    def test_unknown_config_key(self, tmp_path):
        path = tmp_path / "train.env"
        path.write_text("momentum=0.5\n")
        assert run("train", "--dataset", "synthetic", "--config", path)[0] == 1


class TestTraining:
    def test_train_writes_members(self, trained):
        layout = RunLayout(trained)
        assert layout.member_seeds("synthetic", BASE, 1) == [0, 1]
        directory = layout.member_dir("synthetic", BASE, 1, 0)
        for name in ("model.npz", "model_last.npz", "train_log.csv", "metrics.json"):
            assert (directory / name).exists()
        metrics = json.loads((directory / "metrics.json").read_text())
        assert metrics["seed"] == 0
        assert 0.0 <= metrics["test_accuracy"] <= 1.0

    def test_ensembles(self, trained):
        layout = RunLayout(trained)
        assert layout.find_runs("synthetic") == [(BASE, 1), (BASE, 2), (DECORRELATED, 2)]
        base = json.loads(layout.ensemble_report("synthetic", BASE, 2).read_text())
        deco = json.loads(layout.ensemble_report("synthetic", DECORRELATED, 2).read_text())
        assert base["member_predecessors"] == [0, 0]
        assert deco["member_predecessors"] == [0, 1]
        assert len(deco["member_test_accuracy"]) == 2

    def test_base_member_matches_single_model(self, trained):
        layout = RunLayout(trained)
        single = read_csv(layout.member_dir("synthetic", BASE, 1, 0) / "train_log.csv")[1]
        member = read_csv(layout.member_dir("synthetic", BASE, 2, 0) / "train_log.csv")[1]
        # seconds is the last column
        assert [row[:-1] for row in single] == [row[:-1] for row in member]

    def test_manifest(self, trained):
        entries = read_manifests(trained)
        assert [entry["command"] for entry in entries[:3]] == ["train", "ensemble", "ensemble"]
        train = entries[0]
        assert train["seeds"] == [0, 1]
        assert train["config"]["epochs"] == 2
        assert "synthetic/base-1/seed0/model.npz" in train["artifacts"]
        assert train["wall_seconds"] >= 0
        assert set(train["timings"]) == {"seed0", "seed1"}


class TestAnalysis:
    def test_evaluate_then_mcm(self, trained):
        code, stdout, _ = run("evaluate", "--dataset", "synthetic", "--out", trained)
        assert code == 0
        header, rows = read_csv(RunLayout(trained).results_csv)
        assert header == ["dataset", "LITE", "LITETime-2", "Deco-LITETime-2"]
        assert [row[0] for row in rows] == ["synthetic"]
        assert "LITETime-2: mean accuracy" in stdout

        code, stdout, _ = run("mcm", "--out", trained)
        assert code == 0
        assert (trained / "mcm" / "mcm_report.json").exists()
        assert (trained / "mcm" / "mcm_pairwise.csv").exists()
        assert "W/T/L" in stdout

    def test_diversity_of_one_ensemble(self, trained):
        code, stdout, _ = run("diversity", "--dataset", "synthetic", "--kind", "deco", "--size", 2, "--out", trained)
        assert code == 0
        directory = RunLayout(trained).diversity_dir("synthetic", DECORRELATED, 2)
        summary = json.loads((directory / "diversity.json").read_text())
        assert summary["models"] == ["seed0", "seed1"]
        assert summary["fid"][0][0] == 0.0
        header, rows = read_csv(directory / "filter_distances.csv")
        assert len(rows) == 4
        assert header[1] == "seed0:0"
        assert (directory / "filter_embedding.csv").exists()

    def test_fid_comparison(self, trained):
        code, stdout, _ = run("diversity", "--dataset", "synthetic", "--out", trained)
        assert code == 0
        assert "of 1 datasets" in stdout
        header, rows = read_csv(trained / "diversity" / "fid_comparison.csv")
        assert header == ["dataset", "reference_vs_base", "reference_vs_deco"]
        assert rows[0][0] == "synthetic"

    def test_diversity_without_ensemble(self, tmp_path):
        code, _, stderr = run("diversity", "--dataset", "synthetic", "--kind", "base", "--out", tmp_path)
        assert code == 2
        assert "no trained base-2 ensemble" in stderr


def test_mcm_on_results_file(tmp_path):
    results = tmp_path / "results.csv"
    results.write_text("dataset,a,b\nd1,0.9,0.8\nd2,0.8,0.8\nd3,0.7,0.6\n")
    code, stdout, _ = run("mcm", "--results", results, "--out", tmp_path / "out")
    assert code == 0
    assert "a vs b: diff +0.0667  W/T/L 2/1/0  p 0.5" in stdout
    manifest = read_manifests(tmp_path / "out")[0]
    assert manifest["datasets"] == ["d1", "d2", "d3"]
    assert sorted(manifest["artifacts"]) == ["mcm/mcm_pairwise.csv", "mcm/mcm_report.json"]


def test_mcm_on_malformed_results(tmp_path):
    results = tmp_path / "results.csv"
    results.write_text("dataset,a,b\nd1,0.9\n")
    assert run("mcm", "--results", results, "--out", tmp_path)[0] == 2


def test_evaluate_without_runs(tmp_path):
    assert run("evaluate", "--dataset", "synthetic", "--out", tmp_path)[0] == 1


def test_train_records_dataset_cache(ucr_root, small_config, tmp_path):
    cache = tmp_path / "cache"
    argv = ("train", "--dataset", "Toy", "--data-root", ucr_root, "--cache-dir", cache)
    code, _, _ = run(*argv, "--config", small_config, "--seeds", 0, "--out", tmp_path / "out")
    assert code == 0
    assert (cache / "Toy.npz").exists()
    artifacts = read_manifests(tmp_path / "out")[0]["artifacts"]
    assert str(cache / "Toy.npz") in artifacts
    assert "Toy/base-1/seed0/model.npz" in artifacts


def test_smoke_reports_failed_checks(monkeypatch, tmp_path):
    def broken_checkpoint(path):
        raise DataError("checkpoint {0} is truncated".format(path))

    monkeypatch.setattr("decolite.lite.checkpoints.load_checkpoint", broken_checkpoint)
    code, stdout, stderr = run("smoke", "--epochs", 1, "--out", tmp_path)
    assert code == 1
    assert "checkpoint-roundtrip" in stderr
    header, rows = read_csv(tmp_path / "smoke" / "smoke.csv")
    assert header == ["check", "status", "detail"]
    statuses = dict((row[0], row[1]) for row in rows)
    assert statuses["checkpoint-roundtrip"] == "FAIL"
    assert statuses["oracles"] == "pass"
    assert read_manifests(tmp_path)[0]["command"] == "smoke"


def test_smoke_names_malformed_checkpoint(monkeypatch, tmp_path):
    save = checkpoints.save_checkpoint

    def save_with_stray_entry(model, path):
        path = save(model, path)
        with np.load(path) as archive:
            arrays = [(key, archive[key]) for key in archive.files]
        return save_npz(path, arrays + [("stray", np.zeros(3))])

    monkeypatch.setattr(checkpoints, "save_checkpoint", save_with_stray_entry)
    code, _, stderr = run("smoke", "--epochs", 1, "--out", tmp_path)
    assert code == 1
    assert "checkpoint-roundtrip" in stderr
    statuses = dict((row[0], row[1]) for row in read_csv(tmp_path / "smoke" / "smoke.csv")[1])
    assert statuses["checkpoint-roundtrip"] == "FAIL"


@pytest.mark.slow
def test_smoke_passes(tmp_path):
    code, stdout, _ = run("smoke", "--out", tmp_path)
    assert code == 0
    assert "FAIL" not in stdout
