import itertools

import numpy as np

from decolite.utils.exceptions import DimensionError, NumericError

MAX_RANK = 3

_tensor_ids = itertools.count()


class Tensor:
    """
    Dense float64 array of rank <= 3 with an optional gradient slot.

    Tensors built from user data are validated (rank and finiteness);
    tensors produced by primitives are wrapped without copying.
    """

    __slots__ = ("data", "grad", "requires_grad", "id", "name")

    def __init__(self, data, requires_grad=False, name=None):
        array = np.array(data, dtype=np.float64)
        if array.ndim > MAX_RANK:
            raise DimensionError(
                "tensors are limited to rank {0}, got shape {1}".format(
                    MAX_RANK, array.shape
                )
            )
        if not np.all(np.isfinite(array)):
            raise NumericError("non-finite values in tensor data", layer=name)
        self._init(array, requires_grad, name)

    def _init(self, array, requires_grad, name):
        self.data = array
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self.id = next(_tensor_ids)
        self.name = name

    @classmethod
    def wrap(cls, array, requires_grad=False, name=None):
        tensor = cls.__new__(cls)
        tensor._init(array, requires_grad, name)
        return tensor

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data)

    def numpy(self):
        return self.data

    def zero_grad(self):
        self.grad = None

    def accumulate_grad(self, grad):
        if self.grad is None:
            self.grad = np.array(grad, dtype=np.float64)
        else:
            self.grad = self.grad + grad

    def detach(self):
        return Tensor.wrap(self.data, requires_grad=False, name=self.name)

    def __repr__(self):
        return "Tensor(shape={0}, requires_grad={1}{2})".format(
            self.shape,
            self.requires_grad,
            ", name={0!r}".format(self.name) if self.name else "",
        )


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)
