"""Correlation matrices under the Frobenius metric.

The weighted Frechet mean reduces to the nearest-correlation-matrix
problem: project the entrywise weighted average onto the set of symmetric
PSD matrices with unit diagonal.  The projection is computed by
alternating projections with Dykstra's correction, which converges for
this intersection of a convex cone and an affine set.
"""

import numpy as np

from . import ObjectSpace
from ..errors import DataError, DimensionMismatch, NonConvergence

PSD_TOL = -1e-8


def symmetrize(a):
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def validate_corr(m, sym_tol=1e-12, psd_tol=PSD_TOL):
    """Check symmetry, unit diagonal, PSD-ness and off-diagonal range."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.T)) > sym_tol:
        raise DataError("matrix is not symmetric")
    if np.max(np.abs(np.diag(m) - 1.0)) > sym_tol:
        raise DataError("matrix diagonal is not one")
    if np.min(np.linalg.eigvalsh(symmetrize(m))) < psd_tol:
        raise DataError("matrix is not positive semidefinite")
    off = m - np.diag(np.diag(m))
    if np.max(np.abs(off)) > 1.0 + 1e-8:
        raise DataError("off-diagonal entries outside [-1, 1]")
    return m


def frobenius_distance(a, b):
    """Frobenius distance between two symmetric matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, "fro"))


def weighted_matrix_average(weights, ys):
    """Entrywise weighted mean of matrices; symmetrized on output.

    With mean-one weights the diagonal stays exactly one, but the result
    may be indefinite when weights are negative.
    """
    w = np.asarray(weights, dtype=float)
    Y = np.asarray(ys, dtype=float)
    if len(w) != len(Y):
        raise DataError("weights and matrix sample have different lengths")
    total = w.sum()
    if total <= 0:
        raise DataError("weights must have positive sum")
    return symmetrize(np.tensordot(w, Y, axes=1) / total)


def _project_psd(a):
    vals, vecs = np.linalg.eigh(a)
    return (vecs * np.maximum(vals, 0.0)) @ vecs.T


def nearest_correlation(b, tol=1e-8, max_iter=500):
    """Frobenius-nearest correlation matrix to a symmetric matrix ``b``.

    Alternating projections onto the PSD cone (eigenvalue clipping) and
    the unit-diagonal affine set (diagonal overwrite) with Dykstra's
    correction; stops when successive iterates differ by less than
    ``tol`` in Frobenius norm.
    """
    y = symmetrize(b)
    correction = np.zeros_like(y)
    for _ in range(max_iter):
        prev = y
        r = y - correction
        x = _project_psd(r)
        correction = x - r
        y = x.copy()
        np.fill_diagonal(y, 1.0)
        residual = np.linalg.norm(y - prev, "fro")
        if residual < tol:
            # rescale the PSD iterate instead of overwriting its diagonal:
            # a congruence with a positive diagonal keeps the matrix PSD
            # exactly while making the diagonal exactly one
            d = np.sqrt(np.maximum(np.diag(x), tol))
            out = symmetrize(x / np.outer(d, d))
            np.fill_diagonal(out, 1.0)
            return np.clip(out, -1.0, 1.0)
    raise NonConvergence(
        f"nearest_correlation did not converge in {max_iter} iterations "
        f"(last residual {residual:.3e})",
        residual=residual,
    )


def fit_correlation(weights, ys):
    """Weighted Frechet mean: nearest correlation matrix to the average."""
    return nearest_correlation(weighted_matrix_average(weights, ys))


class CorrelationSpace(ObjectSpace):
    """Space of r x r correlation matrices with the Frobenius metric."""

    def distance(self, a, b):
        return frobenius_distance(a, b)

    def weighted_mean(self, weights, ys):
        return fit_correlation(weights, ys)
