"""Classical multidimensional scaling of a distance matrix into the plane."""
from dataclasses import dataclass
from typing import List

import numpy as np

from decolite.diversity.filters import FilterDistanceMatrix
from decolite.utils.exceptions import DimensionError, UsageError
from decolite.utils.files import write_csv

SIGN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Embedding:
    labels: List[str]
    coordinates: np.ndarray
    degenerate: bool = False

    def to_csv(self, path):
        rows = ([label, float(x), float(y)] for label, (x, y) in zip(self.labels, self.coordinates))
        return write_csv(path, ["label", "x", "y"], rows)


def _fix_signs(coordinates):
    for axis in range(coordinates.shape[1]):
        column = coordinates[:, axis]
        nonzero = np.flatnonzero(np.abs(column) > SIGN_TOLERANCE)
        if nonzero.size and column[nonzero[0]] < 0:
            coordinates[:, axis] = -column
    return coordinates


def embed_2d(matrix) -> Embedding:
    """
    Double-centres the squared distances and keeps the two leading
    eigenvectors scaled by the root of their eigenvalues. Each axis is
    oriented so its first non-zero coordinate is positive.
    """
    if isinstance(matrix, FilterDistanceMatrix):
        labels, distances = matrix.label_strings, matrix.d
    else:
        distances = np.asarray(matrix, dtype=np.float64)
        labels = [str(index) for index in range(len(distances))]
    if distances.ndim != 2 or distances.shape[0] != distances.shape[1]:
        raise DimensionError("a distance matrix must be square")
    size = distances.shape[0]
    if size < 3:
        raise UsageError("an embedding needs at least three points")

    if not np.any(distances):
        return Embedding(labels, np.zeros((size, 2)), degenerate=True)

    centering = np.eye(size) - np.full((size, size), 1.0 / size)
    gram = -0.5 * centering @ (distances ** 2) @ centering
    eigenvalues, eigenvectors = np.linalg.eigh((gram + gram.T) / 2.0)
    leading = np.argsort(eigenvalues)[::-1][:2]
    scales = np.sqrt(np.clip(eigenvalues[leading], 0.0, None))
    coordinates = _fix_signs(eigenvectors[:, leading] * scales)
    return Embedding(labels, coordinates)
