from decolite.evaluation.predict import accuracy, predicted_classes
from decolite.experiments.layout import save_member
from decolite.experiments.management.base import DEFAULT_RUNS, DecoCommand
from decolite.training.ensembles import BASE
from decolite.training.trainers import train_base
from decolite.utils.files import write_json


class Command(DecoCommand):
    help = "Trains single LITE models, one per seed, with cross-entropy only."
    training_flags = True

    def handle(self, *args, **options):
        layout = self.layout(options)
        config = self.train_config(options)
        seeds = self.seeds(options, config, DEFAULT_RUNS)
        dataset = options["dataset"]
        train, test = self.load_dataset(dataset, options)
        manifest = self.manifest(
            "train", datasets=[dataset], kind=BASE, size=1, seeds=seeds, config=config.to_dict()
        )

        for seed in seeds:
            model, log = train_base(train, config.with_seed(seed))
            directory = layout.member_dir(dataset, BASE, 1, seed)
            manifest.add(layout.out_dir, *save_member(directory, model, log))
            metrics = {
                "dataset": dataset,
                "seed": seed,
                "best_epoch": log.best_epoch,
                "train_accuracy": accuracy(predicted_classes(model.predict_proba(train.X)), train.y),
                "test_accuracy": accuracy(predicted_classes(model.predict_proba(test.X)), test.y),
                "param_count": model.param_count(),
                "checksum": model.checksum(),
            }
            manifest.add(layout.out_dir, write_json(directory / "metrics.json", metrics))
            manifest.timings["seed{0}".format(seed)] = sum(log.column("seconds"))
            self.stdout.write(
                "{0} seed {1}: train {2:.4f} test {3:.4f}".format(
                    dataset, seed, metrics["train_accuracy"], metrics["test_accuracy"]
                )
            )
        self.close_manifest(layout, manifest)
