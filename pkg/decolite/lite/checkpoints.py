"""
Model checkpoints: a numpy ``.npz`` archive holding every parameter and
running statistic plus a JSON metadata entry (format version, architecture,
seed, class count, checksum). Loading verifies the checksum.
"""
import json
import zipfile
from pathlib import Path

import numpy as np

from decolite.autodiff.tensor import Tensor
from decolite.lite.config import LiteArchitectureConfig
from decolite.lite.models import LiteModel, init_model
from decolite.utils.exceptions import ConfigError, DataError, UsageError
from decolite.utils.files import save_npz

FORMAT_VERSION = 1
META_KEY = "__meta__"
META_FIELDS = ("format_version", "config", "seed", "n_classes", "checksum")
ENTRY_KINDS = ("param", "buffer")


def save_checkpoint(model: LiteModel, path) -> Path:
    meta = {
        "format_version": FORMAT_VERSION,
        "config": model.config.to_dict(),
        "seed": model.seed,
        "n_classes": model.n_classes,
        "checksum": model.checksum(),
    }
    arrays = list(model.named_arrays())
    arrays.append((META_KEY, np.array(json.dumps(meta, sort_keys=True))))
    return save_npz(path, arrays)


def _read_meta(path, meta):
    if not isinstance(meta, dict):
        raise DataError("checkpoint {0}: metadata is not a JSON object".format(path))
    if meta.get("format_version") != FORMAT_VERSION:
        raise DataError(
            "checkpoint {0} has unsupported format version {1}".format(path, meta.get("format_version"))
        )
    missing = [key for key in META_FIELDS if key not in meta]
    if missing:
        raise DataError("checkpoint {0}: metadata lacks {1}".format(path, ", ".join(missing)))
    if not isinstance(meta["config"], dict):
        raise DataError("checkpoint {0}: architecture is not a JSON object".format(path))
    for key in ("seed", "n_classes"):
        if not isinstance(meta[key], int) or isinstance(meta[key], bool) or meta[key] < 0:
            raise DataError("checkpoint {0}: {1} must be a non-negative integer".format(path, key))
    try:
        config = LiteArchitectureConfig.from_dict(meta["config"])
    except (ConfigError, TypeError, ValueError) as error:
        raise DataError("checkpoint {0}: bad architecture: {1}".format(path, error))
    return config


def _split_entries(path, arrays):
    parameters, buffers = {}, {}
    for key, array in arrays.items():
        kind, _, name = key.partition("/")
        if kind not in ENTRY_KINDS or not name:
            raise DataError("checkpoint {0}: unexpected entry {1!r}".format(path, key))
        if array.dtype.kind not in "fiu":
            raise DataError("checkpoint {0}: entry {1!r} is not numeric".format(path, key))
        if kind == "param":
            parameters[name] = Tensor.wrap(
                np.array(array, dtype=np.float64), requires_grad=True, name=name
            )
        else:
            buffers[name] = Tensor.wrap(np.array(array, dtype=np.float64), name=name)
    return parameters, buffers


def load_checkpoint(path) -> LiteModel:
    """
    Rebuilds a model saved by :func:`save_checkpoint`. Anything malformed,
    from the archive down to a single entry, raises ``DataError``.
    """
    path = Path(path)
    if not path.exists():
        raise DataError("checkpoint {0} does not exist".format(path))
    try:
        with np.load(path, allow_pickle=False) as archive:
            meta = json.loads(str(archive[META_KEY]))
            arrays = {key: archive[key] for key in archive.files if key != META_KEY}
    except (OSError, EOFError, ValueError, KeyError, zipfile.BadZipFile) as error:
        raise DataError("checkpoint {0} is unreadable: {1}".format(path, error))

    config = _read_meta(path, meta)
    parameters, buffers = _split_entries(path, arrays)

    # names and shapes must be exactly those of a fresh model of this architecture
    try:
        expected = init_model(config, meta["seed"], meta["n_classes"])
    except UsageError as error:
        raise DataError("checkpoint {0}: {1}".format(path, error))
    layout = {name: array.shape for name, array in expected.named_arrays()}
    found = {"param/" + name: t.data.shape for name, t in parameters.items()}
    found.update({"buffer/" + name: t.data.shape for name, t in buffers.items()})
    if found != layout:
        raise DataError("checkpoint {0}: entries do not match the architecture".format(path))

    model = LiteModel(config, meta["n_classes"], meta["seed"], parameters, buffers)
    if model.checksum() != meta["checksum"]:
        raise DataError("checkpoint {0} failed its checksum".format(path))
    return model
