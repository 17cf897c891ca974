import numba as nb
import numpy as np

from decolite.utils.exceptions import UsageError


@nb.njit(cache=False, nogil=True)
def _accumulated_cost(a, b):
    columns = b.size
    previous = np.zeros(columns)
    current = np.zeros(columns)
    for i in range(a.size):
        for j in range(columns):
            cost = (a[i] - b[j]) ** 2
            if i == 0 and j == 0:
                best = 0.0
            elif i == 0:
                best = current[j - 1]
            elif j == 0:
                best = previous[j]
            else:
                best = min(previous[j], current[j - 1], previous[j - 1])
            current[j] = cost + best
        previous, current = current, previous
    return previous[columns - 1]


def dtw(a, b) -> float:
    """
    Accumulated squared-difference cost of the best monotone warping path
    from (0, 0) to (len(a) - 1, len(b) - 1); no window, no square root.
    """
    a = np.ascontiguousarray(a, dtype=np.float64).ravel()
    b = np.ascontiguousarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise UsageError("dtw needs non-empty series")
    return float(_accumulated_cost(a, b))
