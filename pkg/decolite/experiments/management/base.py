"""
Shared plumbing of the experiment management commands: common flags, the
translation of domain errors into exit codes, dataset loading and manifest
bookkeeping.
"""
import argparse
import logging
import sys
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from decolite.experiments.layout import RunLayout
from decolite.experiments.manifests import RunManifest, append_manifest
from decolite.training.config import MEAN_OFFDIAG, RAW_SUM, load_train_config
from decolite.ucr.cache import cached_dataset
from decolite.ucr.datasets import load_ucr_dataset
from decolite.ucr.synthetic import SYNTHETIC_NAME, synthetic_two_class
from decolite.utils.exceptions import DataError, DecoError, UsageError

logger = logging.getLogger(__name__)

SYNTHETIC_ALIASES = ("synthetic", SYNTHETIC_NAME)
ORTH_NORM_FLAGS = {"mean": MEAN_OFFDIAG, "raw": RAW_SUM}
DEFAULT_RUNS = 5


def parse_seeds(text):
    try:
        seeds = [int(value) for value in text.split(",") if value.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError("seeds must be comma-separated integers: {0!r}".format(text))
    if not seeds or min(seeds) < 0:
        raise argparse.ArgumentTypeError("seeds must be non-negative integers")
    return seeds


class DecoCommand(BaseCommand):
    requires_system_checks = []
    # subclasses pick which of the shared flag groups they take
    training_flags = False
    ensemble_flags = False

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # bad flags surface as CommandError with exit code 1
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except CommandError as error:
            parser = self.create_parser(argv[0], argv[1])
            self.stderr.write("{0}\n\n{1}".format(error, parser.format_help()))
            sys.exit(error.returncode)

    def add_arguments(self, parser):
        parser.add_argument("--out", dest="out_dir", help="output directory")
        parser.add_argument("--data-root", help="UCR archive root (falls back to DECO_DATA_ROOT)")
        parser.add_argument("--cache-dir", help="directory for normalized-dataset caches")
        if self.training_flags:
            parser.add_argument("--dataset", required=True, help="archive dataset name or 'synthetic'")
            parser.add_argument("--seeds", type=parse_seeds, help="comma-separated seeds")
            parser.add_argument("--alpha", type=float)
            parser.add_argument("--epochs", type=int)
            parser.add_argument("--batch-size", type=int)
            parser.add_argument("--orth-norm", choices=sorted(ORTH_NORM_FLAGS))
            parser.add_argument("--config", dest="config_file", help="flat key=value training config")
        if self.ensemble_flags:
            parser.add_argument("--kind", choices=("base", "deco"))
            parser.add_argument("--size", type=int)

    def execute(self, *args, **options):
        self.dataset_caches = []
        try:
            return super().execute(*args, **options)
        except DecoError as error:
            raise CommandError(str(error), returncode=error.exit_code) from error

    # HELPERS
    # --------------------------------------------------------------------------

    def layout(self, options):
        return RunLayout(options.get("out_dir") or settings.DECO_OUTPUT_DIR)

    def train_config(self, options):
        orth_norm = options.get("orth_norm")
        return load_train_config(
            options.get("config_file"),
            alpha=options.get("alpha"),
            epochs=options.get("epochs"),
            batch_size=options.get("batch_size"),
            orth_normalization=ORTH_NORM_FLAGS[orth_norm] if orth_norm else None,
        )

    def seeds(self, options, config, count):
        if options.get("seeds"):
            return options["seeds"]
        return list(range(config.seed, config.seed + count))

    def load_dataset(self, name, options):
        """``(train, test)`` of an archive dataset, or of the bundled synthetic one."""
        if name in SYNTHETIC_ALIASES:
            return synthetic_two_class()
        data_root = options.get("data_root") or settings.DECO_DATA_ROOT
        if not data_root:
            raise UsageError("no UCR archive given: pass --data-root or set DECO_DATA_ROOT")
        if not Path(data_root).is_dir():
            raise DataError("UCR archive root {0} does not exist".format(data_root))
        if options.get("cache_dir"):
            cache_path = Path(options["cache_dir"]) / "{0}.npz".format(name)
            datasets = cached_dataset(load_ucr_dataset, cache_path, data_root, name)
            self.dataset_caches.append(cache_path)
            return datasets
        return load_ucr_dataset(data_root, name)

    def manifest(self, command, **fields):
        return RunManifest(command=command, **fields)

    def close_manifest(self, layout, manifest):
        # dataset caches written while loading count as artifacts of the run
        manifest.add(layout.out_dir, *self.dataset_caches)
        manifest.finish()
        path = append_manifest(layout.out_dir, manifest)
        logger.info("%s: %d artifacts recorded in %s", manifest.command, len(manifest.artifacts), path)
        return path
