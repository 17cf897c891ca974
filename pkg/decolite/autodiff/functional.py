"""
Differentiable primitives over :class:`~decolite.autodiff.tensor.Tensor`.

Every primitive computes its forward pass in float64 with a fixed
accumulation order and registers a closure computing the input gradients.
Convolutions follow the deep-learning convention: cross-correlation, no
kernel flip, "same" zero padding split floor/ceil between left and right.
"""
import numpy as np

from decolite.autodiff.graph import apply
from decolite.autodiff.tensor import Tensor, as_tensor
from decolite.utils.exceptions import (
    DimensionError,
    InputError,
    NumericError,
    StateError,
    UsageError,
)

TRAIN = "train"
EVAL = "eval"


def _require_rank(tensor, rank, what):
    if tensor.ndim != rank:
        raise DimensionError(
            "{0} must have rank {1}, got shape {2}".format(what, rank, tensor.shape)
        )


def _require_finite(tensor, what):
    if not np.all(np.isfinite(tensor.data)):
        raise NumericError("non-finite values in {0}".format(what))


def _same_or_scalar(a, b, op):
    if a.shape != b.shape and a.ndim != 0 and b.ndim != 0:
        raise DimensionError(
            "{0} needs equal shapes or a scalar operand, got {1} and {2}".format(
                op, a.shape, b.shape
            )
        )


def _reduce_to(grad, shape):
    if grad.shape == shape:
        return grad
    return np.asarray(grad.sum()).reshape(shape)


def same_padding(kernel_size, dilation):
    span = (kernel_size - 1) * dilation
    left = span // 2
    return left, span - left


# ELEMENTWISE
# ------------------------------------------------------------------------------


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _same_or_scalar(a, b, "add")

    def backward(grad):
        return _reduce_to(grad, a.shape), _reduce_to(grad, b.shape)

    return apply("add", a.data + b.data, (a, b), backward)


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _same_or_scalar(a, b, "sub")

    def backward(grad):
        return _reduce_to(grad, a.shape), _reduce_to(-grad, b.shape)

    return apply("sub", a.data - b.data, (a, b), backward)


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _same_or_scalar(a, b, "mul")

    def backward(grad):
        return (
            _reduce_to(grad * b.data, a.shape),
            _reduce_to(grad * a.data, b.shape),
        )

    return apply("mul", a.data * b.data, (a, b), backward)


def scale(x, factor):
    factor = float(factor)

    def backward(grad):
        return (grad * factor,)

    return apply("scale", x.data * factor, (x,), backward)


def square(x):
    def backward(grad):
        return (2.0 * x.data * grad,)

    return apply("square", x.data * x.data, (x,), backward)


def absolute(x):
    def backward(grad):
        return (np.sign(x.data) * grad,)

    return apply("abs", np.abs(x.data), (x,), backward)


def relu(x):
    def backward(grad):
        return (grad * (x.data > 0),)

    return apply("relu", np.maximum(x.data, 0.0), (x,), backward)


# REDUCTIONS AND SHAPE
# ------------------------------------------------------------------------------


def sum_all(x):
    def backward(grad):
        return (np.broadcast_to(grad, x.shape).copy(),)

    return apply("sum", np.asarray(x.data.sum()), (x,), backward)


def mean_all(x):
    count = x.size

    def backward(grad):
        return (np.broadcast_to(grad / count, x.shape).copy(),)

    return apply("mean", np.asarray(x.data.sum() / count), (x,), backward)


def reshape(x, shape):
    def backward(grad):
        return (grad.reshape(x.shape),)

    return apply("reshape", x.data.reshape(shape), (x,), backward)


def concat(tensors, axis=1):
    tensors = tuple(tensors)
    if not tensors:
        raise UsageError("concat needs at least one tensor")
    bounds = np.cumsum([0] + [t.shape[axis] for t in tensors])

    def backward(grad):
        return tuple(
            np.take(grad, np.arange(start, stop), axis=axis)
            for start, stop in zip(bounds[:-1], bounds[1:])
        )

    data = np.concatenate([t.data for t in tensors], axis=axis)
    return apply("concat", data, tensors, backward)


def global_avg_pool(x):
    _require_rank(x, 3, "global_avg_pool input")
    length = x.shape[2]
    if length < 1:
        raise DimensionError("global_avg_pool needs T >= 1")

    def backward(grad):
        return (np.repeat(grad[:, :, None] / length, length, axis=2),)

    return apply("global_avg_pool", x.data.mean(axis=2), (x,), backward)


# LAYERS
# ------------------------------------------------------------------------------


def conv1d(x, kernel, bias=None, dilation=1, groups=1):
    """
    Grouped, dilated 1D cross-correlation with "same" padding.

    Args:
        x: input of shape (B, Cin, T).
        kernel: weights of shape (Cout, Cin // groups, K).
        bias: optional (Cout,) tensor.

    Returns:
        Tensor of shape (B, Cout, T).
    """
    _require_rank(x, 3, "conv1d input")
    _require_rank(kernel, 3, "conv1d kernel")
    if dilation < 1 or groups < 1:
        raise DimensionError("dilation and groups must be positive integers")
    batch, in_channels, length = x.shape
    out_channels, in_per_group, kernel_size = kernel.shape
    if in_channels % groups or out_channels % groups:
        raise DimensionError(
            "channels ({0} in, {1} out) are not divisible by groups={2}".format(
                in_channels, out_channels, groups
            )
        )
    if in_per_group != in_channels // groups:
        raise DimensionError(
            "kernel expects {0} input channels per group, input provides {1}".format(
                in_per_group, in_channels // groups
            )
        )
    if bias is not None and bias.shape != (out_channels,):
        raise DimensionError("bias must have shape ({0},)".format(out_channels))
    _require_finite(x, "conv1d input")

    out_per_group = out_channels // groups
    left, right = same_padding(kernel_size, dilation)
    padded = np.pad(x.data, ((0, 0), (0, 0), (left, right)))
    padded = padded.reshape(batch, groups, in_per_group, -1)
    weights = kernel.data.reshape(groups, out_per_group, in_per_group, kernel_size)

    out = np.zeros((batch, groups, out_per_group, length))
    for tap in range(kernel_size):
        offset = tap * dilation
        window = padded[:, :, :, offset : offset + length]
        out += np.matmul(weights[:, :, :, tap], window)
    out = out.reshape(batch, out_channels, length)
    if bias is not None:
        out = out + bias.data[None, :, None]

    def backward(grad):
        grouped = grad.reshape(batch, groups, out_per_group, length)
        grad_padded = np.zeros_like(padded)
        grad_weights = np.zeros_like(weights)
        for tap in range(kernel_size):
            offset = tap * dilation
            window = padded[:, :, :, offset : offset + length]
            grad_weights[:, :, :, tap] = np.matmul(
                grouped, window.transpose(0, 1, 3, 2)
            ).sum(axis=0)
            grad_padded[:, :, :, offset : offset + length] += np.matmul(
                weights[:, :, :, tap].transpose(0, 2, 1), grouped
            )
        grad_x = grad_padded.reshape(batch, in_channels, -1)[
            :, :, left : left + length
        ]
        grads = (grad_x, grad_weights.reshape(kernel.shape))
        if bias is not None:
            grads += (grad.sum(axis=(0, 2)),)
        return grads

    inputs = (x, kernel) if bias is None else (x, kernel, bias)
    return apply("conv1d", out, inputs, backward)


def batch_norm_1d(
    x,
    gamma,
    beta,
    running_mean=None,
    running_var=None,
    mode=TRAIN,
    momentum=0.9,
    epsilon=1e-5,
):
    """
    Per-channel batch normalization over (B, T).

    In train mode the batch statistics (population variance) normalize the
    input and ``running_mean``/``running_var`` are updated in place as
    ``running = momentum * running + (1 - momentum) * batch``. Eval mode
    uses the running statistics only.
    """
    _require_rank(x, 3, "batch_norm_1d input")
    if epsilon <= 0:
        raise UsageError("epsilon must be positive")
    channels = x.shape[1]
    for tensor, what in ((gamma, "gamma"), (beta, "beta")):
        if tensor.shape != (channels,):
            raise DimensionError("{0} must have shape ({1},)".format(what, channels))

    if mode == TRAIN:
        mean = x.data.mean(axis=(0, 2))
        var = x.data.var(axis=(0, 2))
        if running_mean is not None and running_var is not None:
            running_mean.data[...] = (
                momentum * running_mean.data + (1.0 - momentum) * mean
            )
            running_var.data[...] = momentum * running_var.data + (1.0 - momentum) * var
    elif mode == EVAL:
        if running_mean is None or running_var is None:
            raise StateError("eval-mode batch norm needs initialized running stats")
        mean, var = running_mean.data, running_var.data
    else:
        raise UsageError("unknown batch norm mode {0!r}".format(mode))

    inv_std = 1.0 / np.sqrt(var + epsilon)
    normalized = (x.data - mean[None, :, None]) * inv_std[None, :, None]
    out = gamma.data[None, :, None] * normalized + beta.data[None, :, None]

    def backward(grad):
        grad_gamma = (grad * normalized).sum(axis=(0, 2))
        grad_beta = grad.sum(axis=(0, 2))
        grad_normalized = grad * gamma.data[None, :, None]
        if mode == EVAL:
            grad_x = grad_normalized * inv_std[None, :, None]
        else:
            count = x.shape[0] * x.shape[2]
            grad_x = (
                inv_std[None, :, None]
                / count
                * (
                    count * grad_normalized
                    - grad_normalized.sum(axis=(0, 2))[None, :, None]
                    - normalized
                    * (grad_normalized * normalized).sum(axis=(0, 2))[None, :, None]
                )
            )
        return grad_x, grad_gamma, grad_beta

    return apply("batch_norm_1d", out, (x, gamma, beta), backward)


def dense(x, weight, bias):
    _require_rank(x, 2, "dense input")
    _require_rank(weight, 2, "dense weight")
    if weight.shape[1] != x.shape[1] or bias.shape != (weight.shape[0],):
        raise DimensionError(
            "dense shapes do not line up: input {0}, weight {1}, bias {2}".format(
                x.shape, weight.shape, bias.shape
            )
        )

    def backward(grad):
        return grad @ weight.data, grad.T @ x.data, grad.sum(axis=0)

    out = x.data @ weight.data.T + bias.data[None, :]
    return apply("dense", out, (x, weight, bias), backward)


# LOSSES AND SIMILARITIES
# ------------------------------------------------------------------------------


def softmax(logits):
    data = logits.data if isinstance(logits, Tensor) else np.asarray(logits)
    shifted = data - data.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def softmax_cross_entropy(logits, targets):
    """Mean over the batch of -log softmax(logits) at the one-hot target."""
    _require_rank(logits, 2, "logits")
    target = targets.data if isinstance(targets, Tensor) else np.asarray(targets)
    if target.shape != logits.shape:
        raise DimensionError(
            "targets {0} do not match logits {1}".format(target.shape, logits.shape)
        )
    if not (np.isin(target, (0.0, 1.0)).all() and (target.sum(axis=1) == 1).all()):
        raise InputError("targets must be one-hot rows")

    batch = logits.shape[0]
    shifted = logits.data - logits.data.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    picked = (shifted * target).sum(axis=1)
    loss = np.asarray((log_norm - picked).sum() / batch)

    def backward(grad):
        return ((softmax(logits.data) - target) * (grad / batch),)

    return apply("softmax_cross_entropy", loss, (logits,), backward)


def cosine_similarity_matrix(a, b, epsilon=1e-8):
    """
    Cosine similarity between every row of ``a`` and every row of ``b``.

    Accepts (C, T) pairs, giving (C, C), or batched (B, C, T) pairs, giving
    (B, C, C). A zero-norm row yields similarity 0 through the epsilon guard.
    """
    if a.shape != b.shape:
        raise DimensionError(
            "cosine similarity needs equal shapes, got {0} and {1}".format(
                a.shape, b.shape
            )
        )
    if a.ndim not in (2, 3):
        raise DimensionError("cosine similarity needs (C, T) or (B, C, T) inputs")
    if epsilon <= 0:
        raise UsageError("epsilon must be positive")

    a_data, b_data = a.data, b.data
    a_norm = np.sqrt((a_data * a_data).sum(axis=-1))
    b_norm = np.sqrt((b_data * b_data).sum(axis=-1))
    dots = np.matmul(a_data, np.swapaxes(b_data, -1, -2))
    denom = a_norm[..., :, None] * b_norm[..., None, :] + epsilon
    similarity = dots / denom

    def backward(grad):
        grad_dots = grad / denom
        grad_denom = -grad * dots / (denom * denom)
        grad_a = np.matmul(grad_dots, b_data)
        grad_b = np.matmul(np.swapaxes(grad_dots, -1, -2), a_data)
        grad_a_norm = (grad_denom * b_norm[..., None, :]).sum(axis=-1)
        grad_b_norm = (grad_denom * a_norm[..., :, None]).sum(axis=-2)
        safe_a = np.where(a_norm > 0, a_norm, 1.0)
        safe_b = np.where(b_norm > 0, b_norm, 1.0)
        grad_a = grad_a + (grad_a_norm / safe_a)[..., None] * a_data
        grad_b = grad_b + (grad_b_norm / safe_b)[..., None] * b_data
        return grad_a, grad_b

    return apply("cosine_similarity_matrix", similarity, (a, b), backward)
