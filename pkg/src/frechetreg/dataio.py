"""CSV ingestion for user data, one layout per object space.

All files are plain comma-separated numeric tables, one row per
observation, predictors first:

- euclidean:   p predictor columns, then m response columns
- wasserstein: p predictor columns, then M quantile values
- correlation: p predictor columns, then r(r-1)/2 upper-triangle entries
               (row-major, excluding the diagonal)
- sphere:      p predictor columns, then 3 coordinates (renormalized)

A single header line is skipped if the first field does not parse as a
number.
"""

import numpy as np

from .errors import DataError
from .spaces import correlation as corr
from .spaces import sphere as sph
from .spaces import wasserstein as wass


def _load_table(path):
    with open(path) as fh:
        first = fh.readline()
        if not first:
            raise DataError(f"{path}: empty file")
        try:
            float(first.split(",")[0])
            skip = 0
        except ValueError:
            skip = 1
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    except ValueError as exc:
        raise DataError(f"{path}: could not parse CSV ({exc})") from exc
    if not np.all(np.isfinite(table)):
        raise DataError(f"{path}: non-finite values in table")
    return table


def _split(table, p, path):
    if p < 1 or table.shape[1] <= p:
        raise DataError(
            f"{path}: expected {p} predictor column(s) plus response columns, "
            f"got {table.shape[1]} columns"
        )
    return table[:, :p], table[:, p:]


def load_euclidean_csv(path, p=1):
    X, Y = _split(_load_table(path), p, path)
    return X, Y


def load_wasserstein_csv(path, p=1):
    """Returns (X, quantile rows, grid inferred from the column count)."""
    X, Q = _split(_load_table(path), p, path)
    for i, row in enumerate(Q):
        if not wass.is_nondecreasing(row, tol=1e-8):
            raise DataError(f"{path}: row {i} is not a nondecreasing quantile vector")
    return X, Q, wass.QuantileGrid(Q.shape[1])


def load_correlation_csv(path, p=1, r=None):
    """Returns (X, stack of r x r correlation matrices)."""
    X, tri = _split(_load_table(path), p, path)
    n_entries = tri.shape[1]
    if r is None:
        # solve r(r-1)/2 = n_entries
        r = int(round((1 + np.sqrt(1 + 8 * n_entries)) / 2))
    if r * (r - 1) // 2 != n_entries:
        raise DataError(
            f"{path}: {n_entries} correlation entries do not match "
            f"r(r-1)/2 for r={r}"
        )
    iu = np.triu_indices(r, k=1)
    mats = np.empty((len(tri), r, r))
    for i, row in enumerate(tri):
        m = np.eye(r)
        m[iu] = row
        m = m + m.T - np.eye(r)
        mats[i] = corr.symmetrize(m)
        corr.validate_corr(mats[i], psd_tol=-1e-6)
    return X, mats


def load_sphere_csv(path, p=1):
    """Returns (X, unit vectors renormalized on read)."""
    X, Y = _split(_load_table(path), p, path)
    if Y.shape[1] != 3:
        raise DataError(f"{path}: expected 3 coordinate columns, got {Y.shape[1]}")
    return X, np.array([sph.unit(row) for row in Y])
