"""Central finite-difference checks for the reverse-mode primitives."""
import numpy as np

from decolite.autodiff.graph import Graph, no_grad


def numerical_gradient(build_loss, tensor, step=1e-4):
    grad = np.zeros_like(tensor.data)
    flat = tensor.data.reshape(-1)
    with no_grad():
        for index in range(flat.size):
            original = flat[index]
            flat[index] = original + step
            upper = build_loss().item()
            flat[index] = original - step
            lower = build_loss().item()
            flat[index] = original
            grad.reshape(-1)[index] = (upper - lower) / (2.0 * step)
    return grad


def relative_error(analytic, numeric):
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / scale)


def gradient_check(build_loss, tensors, step=1e-4):
    """
    Compares backward gradients of ``build_loss()`` with central differences
    for every tensor in ``tensors`` and returns the worst relative error.
    """
    for tensor in tensors:
        tensor.zero_grad()
    with Graph() as graph:
        loss = build_loss()
    graph.backward(loss)

    worst = 0.0
    for tensor in tensors:
        analytic = tensor.grad if tensor.grad is not None else np.zeros_like(tensor.data)
        numeric = numerical_gradient(build_loss, tensor, step)
        worst = max(worst, relative_error(analytic, numeric))
    return worst
