from decolite.autodiff.graph import Graph, backward, no_grad  # noqa F401
from decolite.autodiff.tensor import Tensor  # noqa F401
