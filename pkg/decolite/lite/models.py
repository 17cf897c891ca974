"""
The LITE classifier.

Block 1 concatenates the multiplexed trainable convolutions (one group per
kernel size) with the frozen custom filters, then batch norm and ReLU.
Blocks 2 and 3 are dilated depthwise separable convolutions (depthwise
kernel, 1x1 pointwise mixing), each followed by batch norm and ReLU. The
post-activation output of block 3 is the feature map used by the feature
orthogonality loss; global average pooling and a dense layer give logits.
All convolutions are bias-free since batch norm follows each of them.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from decolite.autodiff import functional as F
from decolite.autodiff.graph import no_grad
from decolite.autodiff.tensor import Tensor
from decolite.lite.config import LiteArchitectureConfig
from decolite.lite.filters import build_custom_filters
from decolite.utils.exceptions import DimensionError, NumericError, UsageError
from decolite.utils.files import array_digest

logger = logging.getLogger(__name__)

# Trainable parameters of InceptionTime on a two-class problem, the
# reference LITE's size is quoted against.
INCEPTION_TIME_REFERENCE_PARAMS = 420192

DEFAULT_FILTER_SHAPE = (32, 20)


def glorot_uniform(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def _conv_kernel(rng, out_channels, in_per_group, size, groups=1):
    return glorot_uniform(
        rng,
        (out_channels, in_per_group, size),
        fan_in=in_per_group * size,
        fan_out=(out_channels // groups) * size,
    )


@dataclass(frozen=True)
class FinalFilters:
    """Final depthwise kernel bank, one row per channel."""

    values: np.ndarray
    kernel_size: int
    dilation: int

    @property
    def shape(self):
        return self.values.shape

    @property
    def is_default_shape(self):
        return self.values.shape == DEFAULT_FILTER_SHAPE

    def metadata(self):
        return {
            "shape": list(self.values.shape),
            "kernel_size": self.kernel_size,
            "dilation": self.dilation,
            "default_shape": self.is_default_shape,
        }


class LiteModel:
    def __init__(self, config, n_classes, seed, parameters, buffers):
        self.config = config
        self.n_classes = n_classes
        self.seed = seed
        self.parameters: Dict[str, Tensor] = parameters
        self.buffers: Dict[str, Tensor] = buffers
        self.custom_filters = build_custom_filters(config)
        self._custom_tensors = [
            Tensor(kernel.reshape(1, 1, -1), name="custom.{0}{1}".format(kind, length))
            for kind, length, kernel in self.custom_filters.kernels
        ]

    def __repr__(self):
        return "LiteModel(seed={0}, n_classes={1}, params={2})".format(
            self.seed, self.n_classes, self.param_count()
        )

    # FORWARD
    # --------------------------------------------------------------------------

    def _batch_norm(self, block, x, mode):
        return F.batch_norm_1d(
            x,
            self.parameters[block + ".bn.gamma"],
            self.parameters[block + ".bn.beta"],
            self.buffers[block + ".bn.running_mean"],
            self.buffers[block + ".bn.running_var"],
            mode=mode,
            momentum=self.config.bn_momentum,
            epsilon=self.config.bn_epsilon,
        )

    def _separable_block(self, block, x, dilation, mode):
        depthwise = self.parameters[block + ".depthwise.kernel"]
        x = F.conv1d(x, depthwise, dilation=dilation, groups=x.shape[1])
        x = F.conv1d(x, self.parameters[block + ".pointwise.kernel"])
        return F.relu(self._batch_norm(block, x, mode))

    @staticmethod
    def _check(tensor, layer):
        if not np.all(np.isfinite(tensor.data)):
            raise NumericError("non-finite activations", layer=layer)
        return tensor

    def forward(self, x, mode=F.TRAIN) -> Tuple[Tensor, Tensor]:
        """
        Returns ``(logits, features)`` with logits of shape (B, n_classes)
        and the block 3 feature map of shape (B, n_filters, T).
        """
        if mode not in (F.TRAIN, F.EVAL):
            raise UsageError("unknown mode {0!r}".format(mode))
        if not isinstance(x, Tensor):
            x = Tensor(x)
        if x.ndim != 3 or x.shape[1] != 1:
            raise DimensionError(
                "LITE expects univariate input of shape (B, 1, T), got {0}".format(
                    x.shape
                )
            )

        branches = [
            F.conv1d(x, self.parameters["block1.conv{0}.kernel".format(index)])
            for index in range(len(self.config.first_layer_kernel_sizes))
        ]
        branches += [F.conv1d(x, kernel) for kernel in self._custom_tensors]
        hidden = F.relu(self._batch_norm("block1", F.concat(branches, axis=1), mode))
        self._check(hidden, "block1")

        first, second = self.config.dwsc_dilations
        hidden = self._check(self._separable_block("block2", hidden, first, mode), "block2")
        features = self._check(
            self._separable_block("block3", hidden, second, mode), "block3"
        )

        pooled = F.global_avg_pool(features)
        logits = F.dense(pooled, self.parameters["head.weight"], self.parameters["head.bias"])
        return self._check(logits, "head"), features

    __call__ = forward

    def predict_proba(self, x, chunk_size=256):
        probabilities = []
        with no_grad():
            for start in range(0, len(x), chunk_size):
                logits, _ = self.forward(Tensor(x[start : start + chunk_size]), F.EVAL)
                probabilities.append(F.softmax(logits))
        return np.concatenate(probabilities, axis=0)

    def features(self, x, chunk_size=256):
        """Eval-mode block 3 feature maps for a whole (N, 1, T) array."""
        maps = []
        with no_grad():
            for start in range(0, len(x), chunk_size):
                _, features = self.forward(Tensor(x[start : start + chunk_size]), F.EVAL)
                maps.append(features.data)
        return np.concatenate(maps, axis=0)

    # STATE
    # --------------------------------------------------------------------------

    def named_arrays(self):
        arrays = [("param/" + name, self.parameters[name].data) for name in sorted(self.parameters)]
        arrays += [("buffer/" + name, self.buffers[name].data) for name in sorted(self.buffers)]
        return arrays

    def checksum(self):
        return array_digest(self.named_arrays())

    def snapshot(self) -> Dict[str, np.ndarray]:
        return {name: array.copy() for name, array in self.named_arrays()}

    def restore(self, state):
        for key, array in state.items():
            kind, name = key.split("/", 1)
            store = self.parameters if kind == "param" else self.buffers
            store[name].data = np.array(array, dtype=np.float64)

    def frozen_copy(self):
        """Copy whose tensors never require gradients; safe to share read-only."""
        parameters = {
            name: Tensor.wrap(t.data.copy(), requires_grad=False, name=name)
            for name, t in self.parameters.items()
        }
        buffers = {
            name: Tensor.wrap(t.data.copy(), name=name) for name, t in self.buffers.items()
        }
        return LiteModel(self.config, self.n_classes, self.seed, parameters, buffers)

    def param_count(self):
        return param_count(self)


def init_model(config: LiteArchitectureConfig, seed: int, n_classes: int) -> LiteModel:
    """
    Glorot-uniform kernels drawn in a fixed order from ``seed``, zero dense
    bias, batch norm gamma 1 / beta 0 and running stats 0 / 1.
    """
    if n_classes < 2:
        raise UsageError("a classifier needs at least two classes")
    rng = np.random.default_rng(seed)
    parameters: Dict[str, np.ndarray] = {}
    buffers: Dict[str, np.ndarray] = {}

    def batch_norm(block, channels):
        parameters[block + ".bn.gamma"] = np.ones(channels)
        parameters[block + ".bn.beta"] = np.zeros(channels)
        buffers[block + ".bn.running_mean"] = np.zeros(channels)
        buffers[block + ".bn.running_var"] = np.ones(channels)

    for index, (size, count) in enumerate(
        zip(config.first_layer_kernel_sizes, config.filters_per_kernel)
    ):
        parameters["block1.conv{0}.kernel".format(index)] = _conv_kernel(rng, count, 1, size)
    channels = config.first_block_channels
    batch_norm("block1", channels)

    for block, size in zip(("block2", "block3"), config.dwsc_kernel_sizes):
        parameters[block + ".depthwise.kernel"] = _conv_kernel(
            rng, channels, 1, size, groups=channels
        )
        parameters[block + ".pointwise.kernel"] = _conv_kernel(
            rng, config.n_filters, channels, 1
        )
        channels = config.n_filters
        batch_norm(block, channels)

    parameters["head.weight"] = glorot_uniform(
        rng, (n_classes, config.n_filters), config.n_filters, n_classes
    )
    parameters["head.bias"] = np.zeros(n_classes)

    model = LiteModel(
        config,
        n_classes,
        seed,
        {name: Tensor(value, requires_grad=True, name=name) for name, value in parameters.items()},
        {name: Tensor(value, name=name) for name, value in buffers.items()},
    )
    logger.debug("initialized %r", model)
    return model


def expected_param_count(config: LiteArchitectureConfig, n_classes: int) -> int:
    """Trainable parameter count from the layer algebra alone."""
    first = sum(
        count * size
        for count, size in zip(config.filters_per_kernel, config.first_layer_kernel_sizes)
    )
    channels = config.first_block_channels
    total = first + 2 * channels
    for size in config.dwsc_kernel_sizes:
        total += channels * size + config.n_filters * channels + 2 * config.n_filters
        channels = config.n_filters
    return total + config.n_filters * n_classes + n_classes


def param_count(model: LiteModel) -> int:
    return int(sum(tensor.size for tensor in model.parameters.values()))


def ratio_vs_reference(count, reference_count=INCEPTION_TIME_REFERENCE_PARAMS) -> float:
    return count / float(reference_count)


def extract_final_filters(model: LiteModel) -> FinalFilters:
    kernel = model.parameters["block3.depthwise.kernel"].data
    return FinalFilters(
        values=kernel[:, 0, :].copy(),
        kernel_size=model.config.dwsc_kernel_sizes[1],
        dilation=model.config.dwsc_dilations[1],
    )


def trainable_kernel_names(model: LiteModel) -> List[str]:
    return sorted(
        name for name in model.parameters if name.endswith(".kernel") or name == "head.weight"
    )
