from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from decolite.utils.exceptions import ConfigError


@dataclass
class AdamState:
    m: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)
    t: int = 0


def adam_step(
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> Tuple[List[np.ndarray], AdamState]:
    """
    One bias-corrected Adam update. Inputs are left untouched; the updated
    parameters and a new state are returned. A ``None`` gradient counts as zero.
    """
    if lr <= 0:
        raise ConfigError("learning rate must be positive, got {0}".format(lr))
    if len(params) != len(grads):
        raise ConfigError("params and grads differ in length")

    m = state.m or [np.zeros_like(p) for p in params]
    v = state.v or [np.zeros_like(p) for p in params]
    t = state.t + 1
    correction1 = 1.0 - beta1 ** t
    correction2 = 1.0 - beta2 ** t

    new_params, new_m, new_v = [], [], []
    for param, grad, m_i, v_i in zip(params, grads, m, v):
        if grad is None:
            grad = np.zeros_like(param)
        m_i = beta1 * m_i + (1.0 - beta1) * grad
        v_i = beta2 * v_i + (1.0 - beta2) * grad * grad
        m_hat = m_i / correction1
        v_hat = v_i / correction2
        new_params.append(param - lr * m_hat / (np.sqrt(v_hat) + epsilon))
        new_m.append(m_i)
        new_v.append(v_i)
    return new_params, AdamState(m=new_m, v=new_v, t=t)


class Adam:
    """Adam over a named parameter set; ``lr`` may be changed between steps."""

    def __init__(self, parameters: Dict, lr=0.001, beta1=0.9, beta2=0.999, epsilon=1e-8):
        if lr <= 0:
            raise ConfigError("learning rate must be positive, got {0}".format(lr))
        self.names = sorted(parameters)
        self.parameters = parameters
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.state = AdamState()

    def zero_grad(self):
        for name in self.names:
            self.parameters[name].zero_grad()

    def step(self):
        tensors = [self.parameters[name] for name in self.names]
        new_values, self.state = adam_step(
            [t.data for t in tensors],
            [t.grad for t in tensors],
            self.state,
            self.lr,
            self.beta1,
            self.beta2,
            self.epsilon,
        )
        for tensor, value in zip(tensors, new_values):
            tensor.data = value
