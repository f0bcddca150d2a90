"""Closed-form fits for Hilbert-space-valued responses.

When responses live in a Euclidean / Hilbert space, the global fit has
the explicit form beta0 + beta1'(x - Xbar) with beta0 = Ybar and
beta1 = Sigma^{-1} n^{-1} sum (X_i - Xbar) Y_i, and the local fit is the
weighted average with local-linear weights.  These serve both as a fast
path and as exactness oracles for the generic solvers.  The module also
contains the Log-Euclidean closed form for strictly positive definite
matrix responses.
"""

import numpy as np

from .design import PredictorMatrix, local_weights
from .errors import DataError, NotPositiveDefinite
from .kernels import EPANECHNIKOV, Kernel


def closed_form_global(X, ys, x):
    """Explicit global fit for vector responses.

    Identical to the generic weighted Frechet mean under the Euclidean
    metric: returns Ybar + ((x - Xbar)' Sigma^{-1}) @ Gamma1, with
    Gamma1 = n^{-1} sum (X_i - Xbar) Y_i.
    """
    pm = X if isinstance(X, PredictorMatrix) else PredictorMatrix(X)
    Y = np.asarray(ys, dtype=float)
    if len(Y) != pm.n:
        raise DataError("responses do not match predictors")
    squeeze = Y.ndim == 1
    if squeeze:
        Y = Y[:, None]
    x = np.atleast_1d(np.asarray(x, dtype=float))
    gamma1 = pm.centered.T @ Y / pm.n  # (p, m)
    beta1 = pm.solve_cov(gamma1)
    pred = Y.mean(axis=0) + (x - pm.mean) @ beta1
    return pred[0] if squeeze else pred


def closed_form_local(xs, ys, x, h, kernel: Kernel = EPANECHNIKOV):
    """Explicit local-linear fit: weighted average with local weights."""
    Y = np.asarray(ys, dtype=float)
    w = local_weights(xs, x, h, kernel).values
    squeeze = Y.ndim == 1
    if squeeze:
        Y = Y[:, None]
    pred = w @ Y / len(w)
    return pred[0] if squeeze else pred


def sym_logm(a, pd_tol=1e-10):
    """Matrix logarithm of a symmetric positive definite matrix."""
    a = np.asarray(a, dtype=float)
    if np.max(np.abs(a - a.T)) > 1e-10:
        raise NotPositiveDefinite("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(0.5 * (a + a.T))
    if vals[0] <= pd_tol:
        raise NotPositiveDefinite(
            f"matrix is not strictly positive definite (min eigenvalue {vals[0]:.3e})"
        )
    return (vecs * np.log(vals)) @ vecs.T


def sym_expm(a):
    """Matrix exponential of a symmetric matrix (always SPD)."""
    a = np.asarray(a, dtype=float)
    vals, vecs = np.linalg.eigh(0.5 * (a + a.T))
    return (vecs * np.exp(vals)) @ vecs.T


def log_euclidean_local(xs, ys, x, h, kernel: Kernel = EPANECHNIKOV):
    """Local fit of SPD matrices under the Log-Euclidean metric.

    Equals the matrix exponential of the local-linear fit applied to the
    matrix logarithms entrywise.
    """
    logs = np.array([sym_logm(y) for y in ys])
    n, r, _ = logs.shape
    flat = closed_form_local(xs, logs.reshape(n, r * r), x, h, kernel)
    return sym_expm(flat.reshape(r, r))
