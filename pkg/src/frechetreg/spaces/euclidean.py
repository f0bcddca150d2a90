"""Euclidean object space (vectors in R^m)."""

import numpy as np

from . import ObjectSpace
from ..errors import DataError


class EuclideanSpace(ObjectSpace):
    """R^m with the Euclidean metric; the weighted mean is in closed form."""

    def distance(self, a, b):
        return float(np.linalg.norm(np.asarray(a, float) - np.asarray(b, float)))

    def weighted_mean(self, weights, ys):
        w = np.asarray(weights, dtype=float)
        Y = np.asarray(ys, dtype=float)
        if len(w) != len(Y):
            raise DataError("weights and responses have different lengths")
        total = w.sum()
        if total <= 0:
            raise DataError("weights must have positive sum")
        return w @ Y / total

    def weighted_mean_many(self, weight_matrix, ys):
        """Weighted means for many weight vectors at once.

        ``weight_matrix`` has one column per target; returns one row of
        predictions per target.
        """
        W = np.asarray(weight_matrix, dtype=float)
        Y = np.asarray(ys, dtype=float)
        totals = W.sum(axis=0)
        if Y.ndim == 1:
            return (W.T @ Y) / totals
        return (W.T @ Y) / totals[:, None]

    def objective(self, weights, ys, omega):
        w = np.asarray(weights, dtype=float)
        Y = np.asarray(ys, dtype=float)
        if Y.ndim == 1:
            Y = Y[:, None]
        diff = Y - np.atleast_1d(np.asarray(omega, float))
        return float(np.mean(w * np.sum(diff ** 2, axis=1)))
