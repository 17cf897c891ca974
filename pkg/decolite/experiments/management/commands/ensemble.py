from decolite.evaluation.predict import accuracy, ensemble_predict, predicted_classes
from decolite.experiments.layout import load_member, save_member
from decolite.experiments.management.base import DecoCommand
from decolite.training.ensembles import DECORRELATED, build_ensemble, normalize_kind
from decolite.utils.exceptions import UsageError
from decolite.utils.files import write_json

DEFAULT_SIZE = 2


class Command(DecoCommand):
    help = "Trains a LITETime-N (base) or Deco-LITETime-N (deco) ensemble and scores it."
    training_flags = True
    ensemble_flags = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--reference",
            help="directory of an already trained reference model to reuse (deco only)",
        )

    def handle(self, *args, **options):
        layout = self.layout(options)
        config = self.train_config(options)
        kind = normalize_kind(options.get("kind") or "base")
        size = options.get("size") or DEFAULT_SIZE
        seeds = self.seeds(options, config, size)
        dataset = options["dataset"]
        train, test = self.load_dataset(dataset, options)

        reference = None
        if options.get("reference"):
            if kind != DECORRELATED:
                raise UsageError("--reference only applies to deco ensembles")
            reference = load_member(options["reference"])
            if reference[1] is None:
                raise UsageError("the reference directory holds no training log")

        run = build_ensemble(train, config, size, kind, seeds=seeds, reference=reference)
        manifest = self.manifest(
            "ensemble", datasets=[dataset], kind=kind, size=size, seeds=run.seeds, config=config.to_dict()
        )
        for member in run.members:
            directory = layout.member_dir(dataset, kind, size, member.seed)
            manifest.add(layout.out_dir, *save_member(directory, member.model, member.log))
            manifest.timings["seed{0}".format(member.seed)] = sum(member.log.column("seconds"))

        report = run.metadata()
        report["test_accuracy"] = accuracy(predicted_classes(ensemble_predict(run.models, test.X)), test.y)
        report["train_accuracy"] = accuracy(predicted_classes(ensemble_predict(run.models, train.X)), train.y)
        report["member_test_accuracy"] = [
            accuracy(predicted_classes(model.predict_proba(test.X)), test.y) for model in run.models
        ]
        report["member_orth_loss"] = [member.log.last.orth_loss for member in run.members]
        report["member_predecessors"] = [member.log.n_predecessors for member in run.members]
        manifest.add(layout.out_dir, write_json(layout.ensemble_report(dataset, kind, size), report))
        self.close_manifest(layout, manifest)
        self.stdout.write(
            "{0} on {1}: test accuracy {2:.4f}".format(run.name, dataset, report["test_accuracy"])
        )
