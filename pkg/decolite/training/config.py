"""
Run-level training configuration.

Values come from three layers: the dataclass defaults, an optional flat
``key=value`` file and explicit overrides (the command-line flags). The file
is parsed with django-environ into an isolated environment, never into
``os.environ``.
"""
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict

import environ

from decolite.lite.config import LiteArchitectureConfig
from decolite.utils.exceptions import ConfigError, UsageError

MEAN_OFFDIAG = "mean-offdiag"
RAW_SUM = "raw-sum"
ORTH_NORMALIZATIONS = (MEAN_OFFDIAG, RAW_SUM)

BEST_TRAIN_LOSS = "best-train-loss"
LAST_EPOCH = "last-epoch"
CHECKPOINT_POLICIES = (BEST_TRAIN_LOSS, LAST_EPOCH)


@dataclass(frozen=True)
class TrainConfig:
    alpha: float = 0.5
    lr: float = 0.001
    plateau_factor: float = 0.5
    plateau_patience: int = 50
    min_lr: float = 1e-4
    epochs: int = 1500
    batch_size: int = 64
    seed: int = 0
    orth_normalization: str = MEAN_OFFDIAG
    include_diagonal: bool = False
    checkpoint_policy: str = BEST_TRAIN_LOSS
    architecture: LiteArchitectureConfig = field(default_factory=LiteArchitectureConfig)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("alpha must lie in [0, 1], got {0}".format(self.alpha))
        if self.lr <= 0 or self.min_lr <= 0:
            raise ConfigError("learning rates must be positive")
        if not 0.0 < self.plateau_factor < 1.0:
            raise ConfigError("plateau_factor must lie in (0, 1)")
        if self.plateau_patience < 1:
            raise ConfigError("plateau_patience must be at least 1")
        if self.epochs < 1:
            raise ConfigError("epochs must be at least 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.orth_normalization not in ORTH_NORMALIZATIONS:
            raise ConfigError(
                "orth_normalization must be one of {0}".format(", ".join(ORTH_NORMALIZATIONS))
            )
        if self.checkpoint_policy not in CHECKPOINT_POLICIES:
            raise ConfigError(
                "checkpoint_policy must be one of {0}".format(", ".join(CHECKPOINT_POLICIES))
            )

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def with_overrides(self, **overrides):
        """Copy with the non-``None`` overrides applied; ``n_filters`` reaches the architecture."""
        overrides = {key: value for key, value in overrides.items() if value is not None}
        n_filters = overrides.pop("n_filters", None)
        if n_filters is not None:
            overrides["architecture"] = replace(self.architecture, n_filters=n_filters)
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise UsageError("unknown training settings: {0}".format(", ".join(sorted(unknown))))
        return replace(self, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        values = asdict(self)
        values["architecture"] = self.architecture.to_dict()
        return values

    @classmethod
    def from_dict(cls, values):
        values = dict(values)
        architecture = values.pop("architecture", None)
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError("unknown training settings: {0}".format(", ".join(sorted(unknown))))
        if architecture is not None:
            values["architecture"] = LiteArchitectureConfig.from_dict(architecture)
        return cls(**values)


# key in the config file -> (TrainConfig field, environ caster name)
CONFIG_FILE_KEYS = {
    "alpha": ("alpha", "float"),
    "lr": ("lr", "float"),
    "plateau_factor": ("plateau_factor", "float"),
    "plateau_patience": ("plateau_patience", "int"),
    "min_lr": ("min_lr", "float"),
    "epochs": ("epochs", "int"),
    "batch_size": ("batch_size", "int"),
    "seed": ("seed", "int"),
    "orth_norm": ("orth_normalization", "str"),
    "include_diagonal": ("include_diagonal", "bool"),
    "checkpoint_policy": ("checkpoint_policy", "str"),
    "n_filters": ("n_filters", "int"),
}


def read_config_file(path) -> Dict[str, Any]:
    """Typed overrides from a flat ``key=value`` file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config file {0} does not exist".format(path))
    env_class = type("ConfigFileEnv", (environ.Env,), {"ENVIRON": {}})
    env_class.read_env(str(path))
    env = env_class()

    unknown = sorted(set(env.ENVIRON) - set(CONFIG_FILE_KEYS))
    if unknown:
        raise UsageError("unknown keys in {0}: {1}".format(path, ", ".join(unknown)))
    values = {}
    for key in env.ENVIRON:
        name, caster = CONFIG_FILE_KEYS[key]
        try:
            values[name] = getattr(env, caster)(key)
        except ValueError as error:
            raise ConfigError("{0}: bad value for {1}: {2}".format(path, key, error))
    return values


def load_train_config(config_file=None, **overrides) -> TrainConfig:
    config = TrainConfig()
    if config_file is not None:
        config = config.with_overrides(**read_config_file(config_file))
    return config.with_overrides(**overrides)
