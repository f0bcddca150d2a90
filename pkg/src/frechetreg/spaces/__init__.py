"""Object spaces: a metric plus a weighted Frechet mean solver."""

import abc

import numpy as np


class ObjectSpace(abc.ABC):
    """Abstract object space.

    A concrete space supplies a metric ``distance(a, b)`` and a solver
    ``weighted_mean(weights, ys)`` returning the minimizer of
    n^{-1} sum_i w_i d^2(y_i, omega).  Weights may be negative; solvers
    must remain correct under signed weights as long as they sum to a
    positive value.
    """

    @abc.abstractmethod
    def distance(self, a, b):
        """Metric distance between two objects."""

    @abc.abstractmethod
    def weighted_mean(self, weights, ys):
        """Minimizer of the weighted Frechet objective over the space."""

    def frechet_mean(self, ys):
        """Unweighted sample Frechet mean."""
        return self.weighted_mean(np.ones(len(ys)), ys)

    def objective(self, weights, ys, omega):
        """Weighted Frechet objective n^{-1} sum_i w_i d^2(y_i, omega)."""
        w = np.asarray(weights, dtype=float)
        d2 = np.array([self.distance(y, omega) ** 2 for y in ys])
        return float(np.mean(w * d2))


from .euclidean import EuclideanSpace  # noqa: E402
from .wasserstein import WassersteinSpace  # noqa: E402
from .correlation import CorrelationSpace  # noqa: E402
from .sphere import SphereSpace  # noqa: E402

__all__ = [
    "ObjectSpace",
    "EuclideanSpace",
    "WassersteinSpace",
    "CorrelationSpace",
    "SphereSpace",
]
