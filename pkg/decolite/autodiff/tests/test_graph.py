import numpy as np
import pytest

from decolite.autodiff import functional as F
from decolite.autodiff.graph import Graph, backward, no_grad
from decolite.autodiff.tensor import Tensor
from decolite.utils.exceptions import DimensionError, NumericError, UsageError


def test_sum_gives_ones():
    x = Tensor([[1.0, -2.0], [3.0, 4.0]], requires_grad=True)
    with Graph() as graph:
        loss = F.sum_all(x)
    backward(graph, loss)
    assert x.grad.tolist() == [[1.0, 1.0], [1.0, 1.0]]


def test_sum_of_squares_gives_twice_x():
    x = Tensor([1.5, -2.0, 0.0], requires_grad=True)
    with Graph() as graph:
        loss = F.sum_all(F.square(x))
    backward(graph, loss)
    assert x.grad.tolist() == [3.0, -4.0, 0.0]


def test_repeated_backward_accumulates():
    x = Tensor([1.0, 2.0], requires_grad=True)
    with Graph() as graph:
        loss = F.sum_all(F.mul(x, x))
    graph.backward(loss)
    graph.backward(loss)
    assert x.grad.tolist() == [4.0, 8.0]
    x.zero_grad()
    assert x.grad is None


def test_shared_input_gradients_add_up():
    x = Tensor([2.0], requires_grad=True)
    with Graph() as graph:
        loss = F.sum_all(F.add(F.scale(x, 3.0), F.square(x)))
    graph.backward(loss)
    assert x.grad.tolist() == [7.0]


def test_non_scalar_root():
    x = Tensor([1.0, 2.0], requires_grad=True)
    with Graph() as graph:
        out = F.scale(x, 2.0)
    with pytest.raises(UsageError):
        graph.backward(out)


def test_tape_is_in_execution_order():
    x = Tensor(np.ones((1, 2, 3)), requires_grad=True)
    with Graph() as graph:
        F.sum_all(F.global_avg_pool(F.relu(x)))
    assert graph.ops() == ["relu", "global_avg_pool", "sum"]
    first, second = graph.nodes[0], graph.nodes[1]
    assert second.input_ids == (first.output_id,)


def test_nothing_recorded_outside_graph():
    x = Tensor([1.0], requires_grad=True)
    out = F.scale(x, 2.0)
    assert not out.requires_grad
    with Graph() as graph:
        with no_grad():
            F.scale(x, 2.0)
    assert len(graph) == 0


def test_constants_receive_no_gradient():
    x = Tensor([1.0, 2.0], requires_grad=True)
    weights = Tensor([3.0, 4.0])
    with Graph() as graph:
        loss = F.sum_all(F.mul(x, weights))
    graph.backward(loss)
    assert weights.grad is None
    assert x.grad.tolist() == [3.0, 4.0]


def test_construction_rejects_non_finite_and_high_rank():
    with pytest.raises(NumericError):
        Tensor([1.0, np.inf])
    with pytest.raises(DimensionError):
        Tensor(np.zeros((1, 1, 1, 1)))
