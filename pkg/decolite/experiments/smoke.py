"""
Offline end-to-end checks on tiny data: gradients, loss algebra, the
statistical oracles, training on the bundled synthetic dataset, checkpoint
integrity and the training contracts between base and decorrelated models.
"""
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, List, Tuple

import numpy as np

from decolite.autodiff import functional as F
from decolite.autodiff.gradcheck import gradient_check
from decolite.autodiff.tensor import Tensor
from decolite.diversity.dtw import dtw
from decolite.diversity.embedding import embed_2d
from decolite.diversity.features import FeatureStats
from decolite.diversity.fid import fid
from decolite.evaluation.mcm import mcm
from decolite.evaluation.tables import ResultsTable
from decolite.evaluation.wilcoxon import wilcoxon_signed_rank
from decolite.lite import checkpoints
from decolite.lite.config import LiteArchitectureConfig
from decolite.lite.models import init_model
from decolite.training.config import RAW_SUM, TrainConfig
from decolite.training.losses import orthogonality_loss, sequential_orth_loss, total_loss
from decolite.training.trainers import model_accuracy, train_base, train_decorrelated
from decolite.ucr.synthetic import synthetic_two_class
from decolite.utils.exceptions import DecoError
from decolite.utils.files import write_csv

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-3
SMOKE_COLUMNS = ("check", "status", "detail")

TINY_ARCHITECTURE = LiteArchitectureConfig(
    n_filters=2,
    first_layer_kernel_sizes=(4, 2),
    dwsc_kernel_sizes=(3, 3),
    dwsc_dilations=(1, 2),
    increasing_lengths=(2,),
    decreasing_lengths=(2,),
    peak_lengths=(4,),
)


class CheckFailed(Exception):
    pass


@dataclass(frozen=True)
class SmokeResult:
    name: str
    passed: bool
    detail: str

    @property
    def status(self):
        return "pass" if self.passed else "FAIL"


def expect(condition, detail):
    if not condition:
        raise CheckFailed(detail)


def check_gradients(context):
    rng = np.random.default_rng(0)
    model = init_model(TINY_ARCHITECTURE, seed=0, n_classes=2)
    x = Tensor(rng.normal(size=(3, 1, 12)))
    targets = np.eye(2)[[0, 1, 1]]

    def build_loss():
        logits, _ = model(x, F.TRAIN)
        return F.softmax_cross_entropy(logits, targets)

    worst = gradient_check(build_loss, list(model.parameters.values()))
    expect(worst < GRADIENT_TOLERANCE, "LITE relative gradient error {0:.2e}".format(worst))
    return "LITE gradients within {0:g}".format(GRADIENT_TOLERANCE)


def check_loss_algebra(context):
    deco = Tensor([[[1.0, 0.0], [1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)]]])
    base = Tensor([[[1.0, 0.0], [0.0, 1.0]]])
    raw = orthogonality_loss(deco, base, RAW_SUM).item()
    expect(abs(raw - 0.70710678) < 1e-6, "raw-sum hand case gave {0}".format(raw))
    single = Tensor(np.ones((2, 1, 5)))
    expect(orthogonality_loss(single, single).item() == 0.0, "single channel loss is not zero")
    expect(
        sequential_orth_loss(deco, [base]).item() == orthogonality_loss(deco, base).item(),
        "one predecessor does not reduce to the pairwise loss",
    )
    expect(total_loss(1.0, 0.5, 0.5).item() == 0.75, "alpha 0.5 mix")
    expect(total_loss(1.0, 0.5, 1.0).item() == 1.0, "alpha 1 must keep cross-entropy only")
    expect(total_loss(1.0, 0.5, 0.0).item() == 0.5, "alpha 0 must keep orthogonality only")
    return "orthogonality, sequential and mixed losses"


def check_oracles(context):
    expect(dtw([1.0, 2.0], [2.0]) == 1.0, "dtw([1, 2], [2]) != 1")
    expect(
        wilcoxon_signed_rank(np.arange(1.0, 7.0), np.zeros(6)).p_value == 0.03125,
        "exact wilcoxon p for six positive differences",
    )
    report = mcm(ResultsTable(["a", "b"], ["d1", "d2", "d3"], [[0.9, 0.8, 0.7], [0.8, 0.8, 0.6]]))
    record = report.win_tie_loss["a"]["b"]
    expect((record.wins, record.ties, record.losses) == (2, 1, 0), "mcm win/tie/loss")
    one_d = fid(
        FeatureStats("a", np.zeros(1), np.ones((1, 1)), 2),
        FeatureStats("b", np.ones(1), np.full((1, 1), 4.0), 2),
    )
    expect(abs(one_d - 2.0) < 1e-8, "one-dimensional fid gave {0}".format(one_d))
    points = np.random.default_rng(0).normal(size=(5, 2))
    distances = np.linalg.norm(points[:, None] - points[None, :], axis=-1)
    coordinates = embed_2d(distances).coordinates
    recovered = np.linalg.norm(coordinates[:, None] - coordinates[None, :], axis=-1)
    expect(np.abs(recovered - distances).max() < 1e-6, "mds did not recover planar distances")
    return "dtw, wilcoxon, mcm, fid and mds oracles"


def check_synthetic_training(context):
    train, _ = context["dataset"]
    config = replace(context["config"], epochs=context["epochs"])
    model, log = train_base(train, config)
    twin, _ = train_base(train, config)
    expect(model.checksum() == twin.checksum(), "same seed gave different parameters")
    accuracy = model_accuracy(model, train)
    expect(accuracy == 1.0, "train accuracy {0:.4f} after {1} epochs".format(accuracy, config.epochs))
    context["model"] = model
    return "train accuracy 1.0 in {0} epochs, deterministic".format(config.epochs)


def check_checkpoint_roundtrip(context):
    model = context.get("model") or init_model(context["config"].architecture, 0, 2)
    path = checkpoints.save_checkpoint(model, Path(context["out_dir"]) / "roundtrip.npz")
    restored = checkpoints.load_checkpoint(path)
    expect(restored.checksum() == model.checksum(), "checkpoint changed on reload")
    return "bit-exact reload"


def check_training_contracts(context):
    train, _ = context["dataset"]
    config = replace(context["config"], epochs=context["contract_epochs"])
    reference, _ = train_base(train, config)
    base_twin, _ = train_base(train, config.with_seed(1))
    before = reference.checksum()

    deco, log = train_decorrelated(train, config.with_seed(1), [reference.frozen_copy()])
    expect(reference.checksum() == before, "predecessor changed during decorrelated training")
    expect(log.n_predecessors == 1, "decorrelated log does not record its predecessor")

    untrained = [init_model(config.architecture, 1, train.n_classes) for _ in range(2)]
    expect(untrained[0].checksum() == untrained[1].checksum(), "seed pairing broken")

    degenerate, _ = train_decorrelated(train, replace(config.with_seed(1), alpha=1.0), [reference])
    expect(
        degenerate.checksum() == base_twin.checksum(),
        "alpha 1 decorrelated training differs from its base twin",
    )
    return "frozen predecessor, seed pairing, alpha 1 reproduces base"


SMOKE_CHECKS: List[Tuple[str, Callable]] = [
    ("gradients", check_gradients),
    ("loss-algebra", check_loss_algebra),
    ("oracles", check_oracles),
    ("synthetic-training", check_synthetic_training),
    ("checkpoint-roundtrip", check_checkpoint_roundtrip),
    ("training-contracts", check_training_contracts),
]


def run_smoke(out_dir, epochs=200, contract_epochs=5) -> List[SmokeResult]:
    context = {
        "out_dir": Path(out_dir),
        "epochs": epochs,
        "contract_epochs": contract_epochs,
        "config": TrainConfig(seed=0),
        "dataset": synthetic_two_class(),
    }
    results = []
    for name, check in SMOKE_CHECKS:
        try:
            results.append(SmokeResult(name, True, check(context)))
        except (CheckFailed, DecoError) as error:
            logger.error("smoke check %s failed: %s", name, error)
            results.append(SmokeResult(name, False, str(error)))
    return results


def write_smoke_table(results, path):
    return write_csv(path, SMOKE_COLUMNS, ([r.name, r.status, r.detail] for r in results))


def format_smoke_table(results):
    width = max(len(result.name) for result in results)
    lines = ["{0}  {1}".format("check".ljust(width), "status")]
    for result in results:
        lines.append("{0}  {1}  {2}".format(result.name.ljust(width), result.status, result.detail))
    return "\n".join(lines)
