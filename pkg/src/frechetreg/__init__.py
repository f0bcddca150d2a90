"""Frechet regression for responses in metric spaces.

Global and local regression for random objects (probability
distributions, correlation matrices, points on the sphere, vectors) with
Euclidean predictors, plus inference tools and a reproducible simulation
harness.
"""

from .design import (
    PredictorMatrix,
    WeightVector,
    global_weights,
    local_weights,
    nw_weights,
)
from .kernels import EPANECHNIKOV, GAUSSIAN, UNIFORM, Kernel, get_kernel
from .regression import (
    FitResult,
    GlobalFitter,
    LocalFitter,
    NWFitter,
    fit_global,
    fit_local,
    fit_nw,
)
from .spaces import (
    CorrelationSpace,
    EuclideanSpace,
    ObjectSpace,
    SphereSpace,
    WassersteinSpace,
)
from .inference import (
    cv_prediction_error,
    frechet_r2,
    permutation_test,
    select_model,
)

__all__ = [
    "PredictorMatrix",
    "WeightVector",
    "global_weights",
    "local_weights",
    "nw_weights",
    "Kernel",
    "get_kernel",
    "EPANECHNIKOV",
    "GAUSSIAN",
    "UNIFORM",
    "FitResult",
    "fit_global",
    "fit_local",
    "fit_nw",
    "GlobalFitter",
    "LocalFitter",
    "NWFitter",
    "ObjectSpace",
    "EuclideanSpace",
    "WassersteinSpace",
    "CorrelationSpace",
    "SphereSpace",
    "frechet_r2",
    "permutation_test",
    "select_model",
    "cv_prediction_error",
]

__version__ = "0.1.0"
