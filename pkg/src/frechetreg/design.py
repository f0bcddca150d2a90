"""Predictor design handling and the three weighting schemes.

The global weights are s_i(x) = 1 + (X_i - Xbar)' Sigma^{-1} (x - Xbar),
computed from the sample mean and covariance of the predictors.  The local
weights (scalar predictor only) are the signed local-linear weights
s_i(x, h) = K_h(X_i - x) [mu2 - mu1 (X_i - x)] / sigma0^2 built from the
empirical kernel moments mu_j.  Nadaraya-Watson weights are plain
normalized kernel weights.  All three are normalized so that their sample
mean is one, which makes the weighted Frechet objective n^{-1} sum_i w_i
d^2(Y_i, .) directly comparable across schemes.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import (
    BandwidthTooSmall,
    CovarianceSingular,
    DataError,
    EmptyWindow,
)
from .kernels import Kernel


class PredictorMatrix:
    """Validated n x p predictor matrix with cached covariance factorization.

    Construction fails if n < p + 2 or if the sample covariance
    (normalized by n) has smallest eigenvalue below ``eig_tol`` times its
    largest eigenvalue.
    """

    def __init__(self, X, eig_tol=1e-10):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2:
            raise DataError(f"predictors must be 1-D or 2-D, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DataError("predictors contain non-finite values")
        n, p = X.shape
        if n < p + 2:
            raise DataError(
                f"need at least p + 2 = {p + 2} observations, got {n}"
            )
        self.X = X
        self.n = n
        self.p = p
        self.mean = X.mean(axis=0)
        self.centered = X - self.mean
        self.cov = self.centered.T @ self.centered / n
        eigvals = linalg.eigvalsh(self.cov)
        threshold = eig_tol * max(eigvals[-1], 1e-300)
        if eigvals[0] <= threshold:
            raise CovarianceSingular(eigvals[0], threshold)
        self._cho = linalg.cho_factor(self.cov)

    def solve_cov(self, b):
        """Solve Sigma v = b against the cached factorization."""
        return linalg.cho_solve(self._cho, b)


@dataclass
class WeightVector:
    """Signed per-observation weights with provenance tag.

    ``origin`` is 'global', 'local' or 'nw'; local and NW carry the
    bandwidth and kernel name they were built from.
    """

    values: np.ndarray
    origin: str
    bandwidth: float | None = None
    kernel: str | None = None
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)


def global_weights(X, x):
    """Global regression weights at target ``x``.

    Parameters
    ----------
    X : PredictorMatrix or array
    x : array of length p (or scalar when p = 1)
    """
    pm = X if isinstance(X, PredictorMatrix) else PredictorMatrix(X)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (pm.p,):
        raise DataError(f"target has shape {x.shape}, expected ({pm.p},)")
    if not np.all(np.isfinite(x)):
        raise DataError("target point contains non-finite values")
    values = 1.0 + pm.centered @ pm.solve_cov(x - pm.mean)
    return WeightVector(values=values, origin="global")


def local_weights(xs, x, h, kernel: Kernel, sigma_tol=1e-12):
    """Local-linear weights at ``x`` for a scalar predictor sample ``xs``.

    Computes the kernel moments mu_j = n^{-1} sum K_h(X_i - x)(X_i - x)^j
    for j = 0, 1, 2 and sigma0^2 = mu0 mu2 - mu1^2, then
    w_i = K_h(X_i - x)[mu2 - mu1 (X_i - x)] / sigma0^2.  Raises
    BandwidthTooSmall when sigma0^2 degenerates (fewer than two distinct
    predictor values receive positive kernel mass).
    """
    xs = np.asarray(xs, dtype=float).ravel()
    d = xs - float(x)
    kh = kernel.kh(d, h)
    inside = kh > 0
    n_eff = int(np.unique(xs[inside]).size)
    if n_eff < 2:
        raise BandwidthTooSmall(n_eff, h)
    mu0 = kh.mean()
    mu1 = (kh * d).mean()
    mu2 = (kh * d ** 2).mean()
    sigma0sq = mu0 * mu2 - mu1 ** 2
    if sigma0sq <= sigma_tol:
        raise BandwidthTooSmall(n_eff, h)
    values = kh * (mu2 - mu1 * d) / sigma0sq
    values /= values.mean()  # exact mean one; removes roundoff from sigma0sq
    return WeightVector(
        values=values,
        origin="local",
        bandwidth=float(h),
        kernel=kernel.name,
        diagnostics={"mu0": mu0, "mu1": mu1, "mu2": mu2, "sigma0sq": sigma0sq},
    )


def nw_weights(xs, x, h, kernel: Kernel):
    """Nadaraya-Watson kernel weights, normalized to sample mean one."""
    xs = np.asarray(xs, dtype=float).ravel()
    kh = kernel.kh(xs - float(x), h)
    total = kh.sum()
    if total <= 0:
        raise EmptyWindow(
            f"no observation within the kernel window at x={x:g}, h={h:g}"
        )
    values = kh / kh.mean()
    return WeightVector(
        values=values, origin="nw", bandwidth=float(h), kernel=kernel.name
    )
