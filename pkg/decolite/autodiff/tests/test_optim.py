import numpy as np
import pytest

from decolite.autodiff.optim import Adam, AdamState, adam_step
from decolite.autodiff.tensor import Tensor
from decolite.utils.exceptions import ConfigError


def reference_adam(param, grads, lr, beta1=0.9, beta2=0.999, epsilon=1e-8):
    m = v = 0.0
    for t, grad in enumerate(grads, start=1):
        m = beta1 * m + (1 - beta1) * grad
        v = beta2 * v + (1 - beta2) * grad ** 2
        m_hat = m / (1 - beta1 ** t)
        v_hat = v / (1 - beta2 ** t)
        param = param - lr * m_hat / (v_hat ** 0.5 + epsilon)
    return param


def test_zero_gradient_leaves_param_unchanged():
    (param,), state = adam_step([np.array([1.5])], [np.array([0.0])], AdamState(), 0.01)
    assert param.tolist() == [1.5]
    assert state.t == 1


def test_first_step_is_sign_of_gradient():
    (param,), _ = adam_step(
        [np.array([0.0, 0.0])], [np.array([3.0, -0.2])], AdamState(), 0.001
    )
    np.testing.assert_allclose(param, [-0.001, 0.001], rtol=1e-6)


def test_two_step_trace():
    params, state = [np.array([0.5])], AdamState()
    for grad in (0.3, -0.1):
        params, state = adam_step(params, [np.array([grad])], state, 0.01)
    assert params[0][0] == pytest.approx(reference_adam(0.5, [0.3, -0.1], 0.01), abs=1e-15)
    assert state.t == 2


def test_inputs_not_mutated():
    param = np.array([1.0])
    adam_step([param], [np.array([1.0])], AdamState(), 0.1)
    assert param.tolist() == [1.0]


@pytest.mark.parametrize("lr", [0.0, -0.001])
def test_non_positive_learning_rate(lr):
    with pytest.raises(ConfigError):
        adam_step([np.zeros(1)], [np.zeros(1)], AdamState(), lr)


def test_optimizer_updates_named_tensors():
    weight = Tensor([1.0, 2.0], requires_grad=True)
    untouched = Tensor([5.0], requires_grad=True)
    optimizer = Adam({"weight": weight, "untouched": untouched}, lr=0.1)
    weight.grad = np.array([1.0, -1.0])
    optimizer.step()
    np.testing.assert_allclose(weight.data, [0.9, 2.1], rtol=1e-6)
    assert untouched.data.tolist() == [5.0]
    optimizer.zero_grad()
    assert weight.grad is None
