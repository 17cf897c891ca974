from django.core.management.base import CommandError

from decolite.experiments.management.base import DecoCommand
from decolite.experiments.smoke import format_smoke_table, run_smoke, write_smoke_table


class Command(DecoCommand):
    help = "Runs the offline acceptance checks on the bundled synthetic dataset."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--epochs", type=int, default=200, help="synthetic training epochs")

    def handle(self, *args, **options):
        layout = self.layout(options)
        manifest = self.manifest("smoke", datasets=["synthetic"])
        results = run_smoke(layout.smoke_dir, epochs=options["epochs"])
        manifest.add(layout.out_dir, write_smoke_table(results, layout.smoke_dir / "smoke.csv"))
        roundtrip = layout.smoke_dir / "roundtrip.npz"
        if roundtrip.exists():
            manifest.add(layout.out_dir, roundtrip)
        self.close_manifest(layout, manifest)
        self.stdout.write(format_smoke_table(results))

        failed = [result.name for result in results if not result.passed]
        if failed:
            raise CommandError("smoke checks failed: {0}".format(", ".join(failed)), returncode=1)
