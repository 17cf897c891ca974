from decolite.evaluation.mcm import mcm
from decolite.evaluation.tables import ResultsTable
from decolite.evaluation.wilcoxon import format_p_value
from decolite.experiments.management.base import DecoCommand


class Command(DecoCommand):
    help = "Builds the multi-comparison matrix of a results table."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--results", help="results CSV (default: <out>/evaluation/results.csv)")

    def handle(self, *args, **options):
        layout = self.layout(options)
        results = options.get("results") or layout.results_csv
        table = ResultsTable.from_csv(results)
        report = mcm(table)

        manifest = self.manifest("mcm", datasets=list(table.datasets))
        manifest.add(layout.out_dir, *report.write(layout.mcm_dir))
        self.close_manifest(layout, manifest)

        for position, name in enumerate(report.classifiers, start=1):
            self.stdout.write("{0}. {1}  mean accuracy {2:.4f}".format(position, name, report.mean_accuracy[name]))
        for a, b in report.pairs():
            record = report.win_tie_loss[a][b]
            self.stdout.write(
                "{0} vs {1}: diff {2:+.4f}  W/T/L {3}/{4}/{5}  p {6}{7}".format(
                    a,
                    b,
                    report.mean_difference[a][b],
                    record.wins,
                    record.ties,
                    record.losses,
                    format_p_value(report.p_values[a][b]),
                    " *" if report.significant(a, b) else "",
                )
            )
