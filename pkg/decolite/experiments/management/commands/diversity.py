import logging

import numpy as np

from decolite.diversity.embedding import embed_2d
from decolite.diversity.features import GAP, POOLINGS, feature_statistics
from decolite.diversity.fid import fid, fid_comparison
from decolite.diversity.filters import filter_distance_matrix
from decolite.experiments.layout import load_member
from decolite.experiments.management.base import DecoCommand
from decolite.training.ensembles import BASE, DECORRELATED, normalize_kind
from decolite.utils.exceptions import DataError
from decolite.utils.files import write_csv, write_json

logger = logging.getLogger(__name__)

DEFAULT_SIZE = 2


class Command(DecoCommand):
    help = (
        "Feature and filter diversity of trained ensembles. With --kind, analyses that "
        "ensemble; without it, compares base and deco FID against the shared reference."
    )
    ensemble_flags = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--dataset", nargs="+", required=True, dest="datasets")
        parser.add_argument("--split", choices=("test", "train"), default="test")
        parser.add_argument("--pooling", choices=POOLINGS, default=GAP)

    def members(self, layout, dataset, kind, size):
        seeds = layout.member_seeds(dataset, kind, size)
        if not seeds:
            raise DataError(
                "no trained {0}-{1} ensemble for {2} under {3}".format(kind, size, dataset, layout.out_dir)
            )
        return [(seed, load_member(layout.member_dir(dataset, kind, size, seed))[0]) for seed in seeds]

    def split(self, dataset, options):
        train, test = self.load_dataset(dataset, options)
        return test if options["split"] == "test" else train

    def analyse_ensemble(self, layout, dataset, kind, size, options, manifest):
        data = self.split(dataset, options)
        members = self.members(layout, dataset, kind, size)
        ids = ["seed{0}".format(seed) for seed, _ in members]
        stats = [
            feature_statistics(model, data.X, model_id=model_id, pooling=options["pooling"])
            for model_id, (_, model) in zip(ids, members)
        ]
        fid_matrix = np.zeros((len(stats), len(stats)))
        for i in range(len(stats)):
            for j in range(i + 1, len(stats)):
                fid_matrix[i, j] = fid_matrix[j, i] = fid(stats[i], stats[j])

        distances = filter_distance_matrix([model for _, model in members], ids)
        embedding = embed_2d(distances)
        directory = layout.diversity_dir(dataset, kind, size)
        summary = {
            "dataset": dataset,
            "kind": kind,
            "size": size,
            "split": options["split"],
            "pooling": options["pooling"],
            "models": ids,
            "fid": fid_matrix.tolist(),
            "embedding_degenerate": embedding.degenerate,
        }
        manifest.add(
            layout.out_dir,
            write_json(directory / "feature_stats.json", [s.to_dict() for s in stats]),
            write_json(directory / "diversity.json", summary),
            distances.to_csv(directory / "filter_distances.csv"),
            embedding.to_csv(directory / "filter_embedding.csv"),
        )
        self.stdout.write("{0} {1}-{2}: pairwise FID {3}".format(dataset, kind, size, summary["fid"]))

    def compare(self, layout, datasets, size, options, manifest):
        results = []
        for dataset in datasets:
            data = self.split(dataset, options)
            base = self.members(layout, dataset, BASE, size)
            deco = self.members(layout, dataset, DECORRELATED, size)
            if len(base) < 2 or len(deco) < 2:
                raise DataError("{0}: both ensembles need at least two members".format(dataset))
            pooling = options["pooling"]
            reference = feature_statistics(deco[0][1], data.X, "reference", pooling)
            independent = feature_statistics(base[1][1], data.X, "base", pooling)
            decorrelated = feature_statistics(deco[1][1], data.X, "deco", pooling)
            results.append((dataset, fid(reference, independent), fid(reference, decorrelated)))

        comparison = fid_comparison(results)
        manifest.add(
            layout.out_dir,
            write_json(layout.comparison_dir / "fid_comparison.json", comparison.to_dict()),
            write_csv(
                layout.comparison_dir / "fid_comparison.csv",
                ["dataset", "reference_vs_base", "reference_vs_deco"],
                comparison.rows(),
            ),
        )
        self.stdout.write(
            "deco higher on {0}, base higher on {1} of {2} datasets (p {3})".format(
                comparison.deco_wins,
                comparison.base_wins,
                len(comparison.datasets),
                comparison.test.p_display,
            )
        )

    def handle(self, *args, **options):
        layout = self.layout(options)
        size = options.get("size") or DEFAULT_SIZE
        kind = normalize_kind(options["kind"]) if options.get("kind") else None
        manifest = self.manifest("diversity", datasets=options["datasets"], kind=kind, size=size)
        if kind is None:
            self.compare(layout, options["datasets"], size, options, manifest)
        else:
            for dataset in options["datasets"]:
                self.analyse_ensemble(layout, dataset, kind, size, options, manifest)
        self.close_manifest(layout, manifest)
