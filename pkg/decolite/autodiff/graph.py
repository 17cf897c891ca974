"""
Tape-based reverse-mode differentiation.

Primitives executed while a :class:`Graph` is active append one node per
application. Nodes are recorded in execution order, so the tape is already
topologically sorted and ``backward`` simply walks it in reverse.
"""
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from decolite.autodiff.tensor import Tensor
from decolite.utils.exceptions import NumericError, UsageError

_active_graph = ContextVar("active_graph", default=None)


@dataclass(frozen=True)
class Node:
    op: str
    inputs: Tuple[Tensor, ...]
    output: Tensor
    # maps the output gradient to one gradient (or None) per input
    backward: Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]

    @property
    def input_ids(self):
        return tuple(tensor.id for tensor in self.inputs)

    @property
    def output_id(self):
        return self.output.id


class Graph:
    def __init__(self):
        self.nodes: List[Node] = []
        self._produced = set()
        self._token = None

    def __enter__(self):
        self._token = _active_graph.set(self)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        _active_graph.reset(self._token)
        self._token = None

    def __len__(self):
        return len(self.nodes)

    def record(self, op, inputs, output, backward):
        self.nodes.append(Node(op, tuple(inputs), output, backward))
        self._produced.add(output.id)

    def ops(self):
        return [node.op for node in self.nodes]

    def backward(self, loss: Tensor) -> Dict[int, np.ndarray]:
        """
        Accumulates d(loss)/d(leaf) into ``grad`` of every leaf tensor that
        requires a gradient and returns the contributions of this call keyed
        by tensor id. Calling twice without ``zero_grad`` accumulates twice.
        """
        if loss.ndim != 0:
            raise UsageError(
                "backward needs a scalar loss, got shape {0}".format(loss.shape)
            )
        if not np.isfinite(loss.data):
            raise NumericError("non-finite loss at backward time")

        grads = {loss.id: np.ones_like(loss.data)}
        leaves = {}
        if loss.requires_grad and loss.id not in self._produced:
            leaves[loss.id] = loss

        for node in reversed(self.nodes):
            grad_out = grads.pop(node.output_id, None)
            if grad_out is None:
                continue
            for tensor, grad in zip(node.inputs, node.backward(grad_out)):
                if grad is None or not tensor.requires_grad:
                    continue
                if tensor.id in grads:
                    grads[tensor.id] = grads[tensor.id] + grad
                else:
                    grads[tensor.id] = grad
                if tensor.id not in self._produced:
                    leaves[tensor.id] = tensor

        contributions = {}
        for tensor_id, tensor in leaves.items():
            grad = grads[tensor_id]
            tensor.accumulate_grad(grad)
            contributions[tensor_id] = grad
        return contributions


def active_graph() -> Optional[Graph]:
    return _active_graph.get()


@contextmanager
def no_grad():
    token = _active_graph.set(None)
    try:
        yield
    finally:
        _active_graph.reset(token)


def backward(graph: Graph, loss: Tensor) -> Dict[int, np.ndarray]:
    return graph.backward(loss)


def apply(op, array, inputs, backward_fn, name=None):
    """Wraps ``array`` as the output of ``op`` and records it when needed."""
    graph = active_graph()
    requires_grad = graph is not None and any(t.requires_grad for t in inputs)
    output = Tensor.wrap(array, requires_grad=requires_grad, name=name)
    if requires_grad:
        graph.record(op, inputs, output, backward_fn)
    return output
