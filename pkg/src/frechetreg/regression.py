"""Global, local and Nadaraya-Watson Frechet regression fits.

Each fit computes a weight vector from the predictors and delegates the
weighted Frechet mean solve to the object space.  Fitter objects bundle a
method with its tuning parameters so inference and cross-validation code
can treat all three uniformly.
"""

from dataclasses import dataclass

import numpy as np

from .design import (
    PredictorMatrix,
    WeightVector,
    global_weights,
    local_weights,
    nw_weights,
)
from .errors import DataError
from .kernels import EPANECHNIKOV, Kernel
from .spaces import ObjectSpace
from .spaces.euclidean import EuclideanSpace


@dataclass
class FitResult:
    estimate: object
    objective: float
    weights: WeightVector


def _solve(space, weights, ys):
    if len(weights) != len(ys):
        raise DataError(
            f"{len(ys)} responses for {len(weights)} predictor rows"
        )
    estimate = space.weighted_mean(weights.values, ys)
    return FitResult(
        estimate=estimate,
        objective=space.objective(weights.values, ys, estimate),
        weights=weights,
    )


def fit_global(space: ObjectSpace, X, ys, x):
    """Global Frechet regression fit at target ``x``."""
    return _solve(space, global_weights(X, x), ys)


def fit_local(space: ObjectSpace, xs, ys, x, h, kernel: Kernel = EPANECHNIKOV):
    """Local Frechet regression fit at ``x`` (scalar predictor)."""
    return _solve(space, local_weights(_scalar(xs), x, h, kernel), ys)


def fit_nw(space: ObjectSpace, xs, ys, x, h, kernel: Kernel = EPANECHNIKOV):
    """Nadaraya-Watson fit at ``x`` (scalar predictor)."""
    return _solve(space, nw_weights(_scalar(xs), x, h, kernel), ys)


def _scalar(xs):
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 2:
        if xs.shape[1] != 1:
            raise DataError(
                "local and Nadaraya-Watson methods require a scalar predictor"
            )
        xs = xs[:, 0]
    return xs


class GlobalFitter:
    """Global Frechet regression as a reusable fitter."""

    name = "global"

    def __call__(self, space, X, ys, x):
        return fit_global(space, X, ys, x).estimate

    def fit_at(self, space, X, ys, xs):
        """Fits at many targets; vectorized on Euclidean object spaces."""
        pm = X if isinstance(X, PredictorMatrix) else PredictorMatrix(X)
        xs = np.asarray(xs, dtype=float)
        if xs.ndim == 1:
            xs = xs[:, None]
        if isinstance(space, EuclideanSpace):
            # weight matrix, one column per target
            W = 1.0 + pm.centered @ pm.solve_cov((xs - pm.mean).T)
            return space.weighted_mean_many(W, ys)
        return [fit_global(space, pm, ys, x).estimate for x in xs]


class LocalFitter:
    """Local Frechet regression with fixed bandwidth and kernel."""

    name = "local"

    def __init__(self, h, kernel: Kernel = EPANECHNIKOV):
        self.h = h
        self.kernel = kernel

    def __call__(self, space, X, ys, x):
        return fit_local(
            space, X, ys, float(np.atleast_1d(x)[0]), self.h, self.kernel
        ).estimate

    def fit_at(self, space, X, ys, xs):
        xs_flat = np.atleast_2d(np.asarray(xs, dtype=float).T).T[:, 0]
        return [self(space, X, ys, x) for x in xs_flat]


class NWFitter:
    """Nadaraya-Watson smoother with fixed bandwidth and kernel."""

    name = "nw"

    def __init__(self, h, kernel: Kernel = EPANECHNIKOV):
        self.h = h
        self.kernel = kernel

    def __call__(self, space, X, ys, x):
        return fit_nw(
            space, X, ys, float(np.atleast_1d(x)[0]), self.h, self.kernel
        ).estimate

    def fit_at(self, space, X, ys, xs):
        xs_flat = np.atleast_2d(np.asarray(xs, dtype=float).T).T[:, 0]
        return [self(space, X, ys, x) for x in xs_flat]
