import logging

from decolite.evaluation.predict import accuracy, ensemble_predict, predicted_classes
from decolite.evaluation.tables import ResultsTable
from decolite.experiments.layout import load_member
from decolite.experiments.management.base import DecoCommand
from decolite.training.ensembles import BASE, ensemble_name
from decolite.utils.exceptions import UsageError

logger = logging.getLogger(__name__)

SINGLE_MODEL = "LITE"


def classifier_name(kind, size):
    return SINGLE_MODEL if (kind, size) == (BASE, 1) else ensemble_name(kind, size)


class Command(DecoCommand):
    help = "Scores every trained run of the given datasets on their test splits."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--dataset", nargs="+", required=True, dest="datasets")

    def collect(self, layout, dataset, options):
        """``(classifier, dataset, accuracy)`` records for one dataset."""
        _, test = self.load_dataset(dataset, options)
        records = []
        for kind, size in layout.find_runs(dataset):
            seeds = layout.member_seeds(dataset, kind, size)
            if not seeds:
                continue
            models = [load_member(layout.member_dir(dataset, kind, size, seed))[0] for seed in seeds]
            name = classifier_name(kind, size)
            if name == SINGLE_MODEL:
                # repeated single-model runs are averaged into one cell
                for model in models:
                    records.append((name, dataset, accuracy(predicted_classes(model.predict_proba(test.X)), test.y)))
            else:
                probabilities = ensemble_predict(models, test.X)
                records.append((name, dataset, accuracy(predicted_classes(probabilities), test.y)))
        return records

    def handle(self, *args, **options):
        layout = self.layout(options)
        datasets = options["datasets"]
        manifest = self.manifest("evaluate", datasets=datasets)

        records = []
        for dataset in datasets:
            found = self.collect(layout, dataset, options)
            if not found:
                logger.warning("no trained runs for %s under %s", dataset, layout.out_dir)
            records.extend(found)
        if not records:
            raise UsageError("nothing to evaluate under {0}".format(layout.out_dir))

        covered = {}
        for classifier, dataset, _ in records:
            covered.setdefault(classifier, set()).add(dataset)
        evaluated = {dataset for _, dataset, _ in records}
        for name, seen in covered.items():
            if seen != evaluated:
                logger.warning("%s lacks results on some datasets and is left out", name)
        table = ResultsTable.from_runs(
            record for record in records if covered[record[0]] == evaluated
        )

        manifest.add(layout.out_dir, table.to_csv(layout.results_csv))
        self.close_manifest(layout, manifest)
        for name in table.classifiers:
            self.stdout.write("{0}: mean accuracy {1:.4f}".format(name, table.mean_accuracy(name)))

