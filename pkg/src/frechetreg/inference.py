"""Frechet R^2, permutation test, model selection and cross-validation."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .design import PredictorMatrix
from .errors import DataError, DegenerateResponse
from .spaces import ObjectSpace


@dataclass
class FitReport:
    r2: float
    r2_adjusted: float
    n: int
    q: int
    frechet_variance: float


@dataclass
class PermutationResult:
    observed_stat: float
    null_stats: np.ndarray
    p_value: float


@dataclass
class ModelSelection:
    subset: tuple
    r2_adjusted: float
    reports: dict = field(default_factory=dict)


def _as_matrix(X):
    X = np.asarray(X, dtype=float)
    return X[:, None] if X.ndim == 1 else X


def _fits_at_observations(space, X, ys, fitter):
    if hasattr(fitter, "fit_at"):
        return fitter.fit_at(space, X, ys, _as_matrix(X))
    return [fitter(space, X, ys, x) for x in _as_matrix(X)]


def frechet_r2(space: ObjectSpace, X, ys, fitter) -> FitReport:
    """Frechet coefficient of determination of a fitted regression.

    R^2 = 1 - sum_i d^2(Y_i, fit(X_i)) / sum_i d^2(Y_i, omega) with omega
    the sample Frechet mean; the adjusted value subtracts the usual
    (1 - R^2) q / (n - q - 1) penalty for q predictors.
    """
    X = _as_matrix(X)
    n, q = X.shape
    if n < 3:
        raise DataError(f"need at least 3 observations, got {n}")
    omega = space.frechet_mean(ys)
    denom = sum(space.distance(y, omega) ** 2 for y in ys)
    if denom <= 1e-12:
        raise DegenerateResponse("responses are constant; Frechet variance is zero")
    fits = _fits_at_observations(space, X, ys, fitter)
    num = sum(space.distance(y, f) ** 2 for y, f in zip(ys, fits))
    r2 = 1.0 - num / denom
    adjusted = r2 - (1.0 - r2) * q / (n - q - 1)
    return FitReport(
        r2=r2,
        r2_adjusted=adjusted,
        n=n,
        q=q,
        frechet_variance=denom / n,
    )


def permutation_test(
    space: ObjectSpace, X, ys, fitter, B=199, seed=None
) -> PermutationResult:
    """Permutation test of no predictor effect using R^2 as the statistic.

    Predictors are permuted B times; the p-value uses the +1 smoothing
    (1 + #{null >= observed}) / (B + 1), which avoids exact zeros.
    """
    if B < 99:
        raise DataError(f"need at least 99 permutations, got {B}")
    X = _as_matrix(X)
    rng = np.random.default_rng(seed)
    observed = frechet_r2(space, X, ys, fitter).r2
    null_stats = np.empty(B)
    for b in range(B):
        perm = rng.permutation(len(X))
        null_stats[b] = frechet_r2(space, X[perm], ys, fitter).r2
    p_value = (1 + int(np.sum(null_stats >= observed))) / (B + 1)
    return PermutationResult(
        observed_stat=observed, null_stats=null_stats, p_value=p_value
    )


def select_model(space: ObjectSpace, X, ys, fitter) -> ModelSelection:
    """Exhaustive predictor-subset search maximizing adjusted R^2.

    Follows the two-stage rule (best size first, then best subset of that
    size), which coincides with the global maximizer; ties favor fewer
    predictors, then lexicographic order.  Exhaustive search is capped at
    p <= 15.
    """
    X = _as_matrix(X)
    p = X.shape[1]
    if p > 15:
        raise DataError(
            f"exhaustive subset selection supports at most 15 predictors, got {p}"
        )
    reports = {}
    best = None
    for q in range(1, p + 1):
        for subset in itertools.combinations(range(p), q):
            report = frechet_r2(space, X[:, subset], ys, fitter)
            reports[subset] = report
            key = (-report.r2_adjusted, q, subset)
            if best is None or key < best[0]:
                best = (key, subset, report)
    return ModelSelection(
        subset=best[1], r2_adjusted=best[2].r2_adjusted, reports=reports
    )


def _fold_indices(n, k, rng):
    # size-balanced folds; remainder spread over the first folds
    perm = rng.permutation(n)
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    folds = []
    start = 0
    for size in sizes:
        folds.append(perm[start : start + size])
        start += size
    return folds


def cv_prediction_error(
    space: ObjectSpace, X, ys, fitter, k=5, repeats=1, seed=None
):
    """k-fold cross-validated mean squared prediction error.

    Mean over repeats of the per-observation squared distance between
    held-out responses and the fit trained on the remaining folds.
    """
    X = _as_matrix(X)
    n = len(X)
    if k < 2:
        raise DataError(f"need k >= 2 folds, got {k}")
    if k < n and n < 2 * k:
        raise DataError(f"need n >= 2k for {k}-fold CV, got n={n}")
    if k > n:
        raise DataError(f"cannot split {n} observations into {k} folds")
    ys_list = list(ys)
    rng = np.random.default_rng(seed)
    repeat_errors = []
    for _ in range(repeats):
        sq_errors = np.empty(n)
        for fold in _fold_indices(n, k, rng):
            mask = np.ones(n, dtype=bool)
            mask[fold] = False
            train_X = X[mask]
            train_Y = [ys_list[i] for i in np.flatnonzero(mask)]
            if hasattr(fitter, "fit_at"):
                preds = fitter.fit_at(space, train_X, train_Y, X[fold])
            else:
                preds = [fitter(space, train_X, train_Y, x) for x in X[fold]]
            for idx, pred in zip(fold, preds):
                sq_errors[idx] = space.distance(ys_list[idx], pred) ** 2
        repeat_errors.append(sq_errors.mean())
    return float(np.mean(repeat_errors))
