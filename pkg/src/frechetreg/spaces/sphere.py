"""The unit sphere S^2 in R^3 with geodesic distance.

Weighted Frechet means are computed by Riemannian gradient descent with
Armijo backtracking and multi-start initialization.  The module also
houses the spiral regression truth, the tangent-noise generator and the
MISE evaluation used by the simulation harness.
"""

from dataclasses import dataclass

import numpy as np

from . import ObjectSpace
from ..errors import (
    AntipodalPoint,
    DataError,
    NonConvergence,
    ParameterDomain,
)
from ..kernels import EPANECHNIKOV
from ..design import local_weights, nw_weights

_ANTIPODAL_MARGIN = 1e-6
_TINY = 1e-15


def unit(v):
    """Renormalize a 3-vector onto the sphere."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm < _TINY:
        raise DataError("cannot normalize the zero vector")
    return v / norm


def geodesic_distance(y, z):
    """Great-circle distance arccos(z'y), clamped against rounding."""
    return float(np.arccos(np.clip(np.dot(y, z), -1.0, 1.0)))


def exp_map(base, vec):
    """Exponential map: cos(|v|) base + sin(|v|) v/|v|; base for v = 0."""
    vec = np.asarray(vec, dtype=float)
    norm = np.linalg.norm(vec)
    if norm < _TINY:
        return np.asarray(base, dtype=float).copy()
    return unit(np.cos(norm) * np.asarray(base, float) + np.sin(norm) * vec / norm)


def log_map(base, y):
    """Inverse of exp_map; tangent vector at ``base`` pointing to ``y``.

    Raises AntipodalPoint when ``y`` is numerically antipodal to ``base``
    (the log map is not defined there).
    """
    theta = geodesic_distance(base, y)
    if theta < _TINY:
        return np.zeros(3)
    if theta > np.pi - _ANTIPODAL_MARGIN:
        raise AntipodalPoint(
            f"log map undefined: points are antipodal (distance {theta:.6f})"
        )
    base = np.asarray(base, dtype=float)
    y = np.asarray(y, dtype=float)
    return theta * (y - np.cos(theta) * base) / np.sin(theta)


def _log_all(p, ys):
    """Vectorized log map of all rows of ``ys`` at ``p``.

    Antipodal rows are handled with a clamped sine (their direction is
    ill-defined; the solver only needs a descent direction).  Returns the
    tangent vectors and the geodesic distances.
    """
    dots = np.clip(ys @ p, -1.0, 1.0)
    theta = np.arccos(dots)
    sin_theta = np.sqrt(np.maximum(1.0 - dots ** 2, _TINY ** 2))
    scale = np.where(theta < _TINY, 1.0, theta / sin_theta)
    vecs = scale[:, None] * (ys - dots[:, None] * p)
    return vecs, theta


def _grad_obj(p, w, ys):
    vecs, theta = _log_all(p, ys)
    obj = float(np.mean(w * theta ** 2))
    grad = -(2.0 / len(w)) * (w @ vecs)
    grad -= (grad @ p) * p  # re-project against rounding drift
    return grad, obj


def _fixed_point(p, w, ys, grad_tol, max_iter):
    """Tangent-mean iteration p <- Exp_p(sum w_i Log_p(y_i) / sum w_i).

    One log-map sweep per iteration and no objective comparisons, so it
    can drive the gradient norm all the way to tolerance; divergence is
    detected by monitoring the gradient and the best point is kept.
    """
    n = len(w)
    wsum = w.sum()
    best = None
    for _ in range(max_iter):
        vecs, theta = _log_all(p, ys)
        obj = float(np.mean(w * theta ** 2))
        grad = -(2.0 / n) * (w @ vecs)
        grad -= (grad @ p) * p
        gn = np.linalg.norm(grad)
        if best is None or gn < best[2]:
            best = (p, obj, gn)
        if gn < grad_tol:
            return p, obj, gn, True
        if gn > 10.0 * best[2] + grad_tol:
            break  # diverging; report the best point seen
        p = exp_map(p, (w @ vecs) / wsum)
    return best + (best[2] < grad_tol,)


def _descend(p, w, ys, grad_tol, max_iter):
    """Minimize from ``p``; returns (point, objective, grad_norm, ok).

    The cheap fixed-point iteration is tried first (it is the exact
    minimizer step for a locally Euclidean configuration and contracts
    for the kernel-weighted clusters this solver sees in practice); if it
    fails, Armijo-backtracked gradient descent takes over, followed by a
    final fixed-point pass to cross the floating-point noise floor of
    the objective near the optimum.
    """
    wsum = w.sum()
    if wsum > 0:
        p, obj, gn, ok = _fixed_point(p, w, ys, grad_tol, max_iter)
        if ok:
            return p, obj, gn, ok

    for _ in range(max_iter):
        grad, obj = _grad_obj(p, w, ys)
        gn = np.linalg.norm(grad)
        if gn < max(grad_tol, 1e-6):
            break
        step = 1.0
        accepted = False
        while step > 1e-14:
            cand = exp_map(p, -step * grad)
            _, theta_c = _log_all(cand, ys)
            obj_c = float(np.mean(w * theta_c ** 2))
            if obj_c <= obj - 0.25 * step * gn ** 2:
                p = cand
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break  # objective noise floor; polish below

    if wsum > 0:
        return _fixed_point(p, w, ys, grad_tol, max_iter)
    grad, obj = _grad_obj(p, w, ys)
    gn = np.linalg.norm(grad)
    return p, obj, gn, gn < grad_tol


def weighted_frechet_mean_sphere(
    weights, ys, init=None, grad_tol=1e-9, max_iter=200
):
    """Weighted Frechet mean on S^2 by multi-start gradient descent.

    Starting points: the normalized weighted Euclidean average (when its
    norm exceeds 1e-6) and the data point with the lowest objective; an
    explicit ``init`` is tried first and accepted early when it converges
    to an objective no worse than both raw starting points offer.
    """
    w = np.asarray(weights, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if ys.ndim == 1:
        ys = ys[None, :]
    if not np.any(w != 0):
        raise DataError("all weights are zero")
    n = len(w)

    def objective_at(p):
        return float(np.mean(w * np.arccos(np.clip(ys @ p, -1.0, 1.0)) ** 2))

    starts = []
    avg = w @ ys
    if np.linalg.norm(avg) > 1e-6:
        starts.append(avg / np.linalg.norm(avg))

    if init is not None:
        # warm start: accept early when it converges and beats the raw
        # canonical starting points, skipping the extra descents
        p, obj, gn, ok = _descend(unit(init), w, ys, grad_tol, max_iter)
        if ok and all(obj <= objective_at(s) + 1e-12 for s in starts):
            return p

    objs = np.arccos(np.clip(ys @ ys.T, -1.0, 1.0)) ** 2 @ w
    starts.append(ys[int(np.argmin(objs))])

    results = []
    for s in starts:
        results.append(_descend(unit(s), w, ys, grad_tol, max_iter))
    if init is not None:
        results.append((p, obj, gn, ok))
    converged = [r for r in results if r[3]]
    if not converged:
        raise NonConvergence(
            "weighted Frechet mean on the sphere did not converge from any start",
            diagnostics={
                "grad_norms": [r[2] for r in results],
                "objectives": [r[1] for r in results],
                "n": n,
            },
        )
    best = min(converged, key=lambda r: r[1])
    return best[0]


class SphereSpace(ObjectSpace):
    """S^2 with geodesic distance and gradient-descent weighted means."""

    def __init__(self, grad_tol=1e-9, max_iter=200):
        self.grad_tol = grad_tol
        self.max_iter = max_iter

    def distance(self, a, b):
        return geodesic_distance(a, b)

    def weighted_mean(self, weights, ys, init=None):
        return weighted_frechet_mean_sphere(
            weights, ys, init=init, grad_tol=self.grad_tol, max_iter=self.max_iter
        )


# ---------------------------------------------------------------------------
# Spiral simulation
# ---------------------------------------------------------------------------


def spiral_truth(x):
    """Spiral regression curve ((1-x^2)^1/2 cos(pi x), ... sin(pi x), x)."""
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ParameterDomain(f"spiral is defined for x in (0, 1), got {x:g}")
    r = np.sqrt(1.0 - x ** 2)
    return np.array([r * np.cos(np.pi * x), r * np.sin(np.pi * x), x])


def tangent_basis(p):
    """Deterministic orthonormal basis of the tangent plane at ``p``.

    Gram-Schmidt of the canonical axis least aligned with ``p``; fixed
    construction so seeded noise draws are reproducible.
    """
    p = np.asarray(p, dtype=float)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(p)))] = 1.0
    b1 = unit(axis - (axis @ p) * p)
    b2 = np.cross(p, b1)
    return b1, b2


@dataclass
class SphereSample:
    x: np.ndarray
    y: np.ndarray  # (n, 3) unit vectors


def simulate_sphere(n, noise_var, seed=None):
    """Spiral data with bivariate normal tangent noise of given variance."""
    if noise_var < 0:
        raise ParameterDomain(f"noise variance must be >= 0, got {noise_var}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=n)
    y = np.empty((n, 3))
    sd = np.sqrt(noise_var)
    for i in range(n):
        base = spiral_truth(x[i])
        b1, b2 = tangent_basis(base)
        z1, z2 = sd * rng.standard_normal(2)
        y[i] = exp_map(base, z1 * b1 + z2 * b2)
    return SphereSample(x=x, y=y)


def fit_sphere_curve(
    xs,
    ys,
    xgrid,
    h,
    method="lf",
    kernel=EPANECHNIKOV,
    grad_tol=1e-9,
    max_iter=200,
):
    """Fit at every node of ``xgrid``, warm-starting along the grid.

    ``method`` is 'lf' (local Frechet) or 'nw'.  Failed fits (degenerate
    window or non-convergence) yield a NaN row; callers decide how to
    aggregate.  Returns (fits, n_failures).
    """
    ys = np.asarray(ys, dtype=float)
    fits = np.full((len(xgrid), 3), np.nan)
    failures = 0
    prev = None
    for j, x0 in enumerate(xgrid):
        try:
            if method == "lf":
                w = local_weights(xs, x0, h, kernel)
            elif method == "nw":
                w = nw_weights(xs, x0, h, kernel)
            else:
                raise ParameterDomain(f"unknown sphere method {method!r}")
            fits[j] = weighted_frechet_mean_sphere(
                w.values, ys, init=prev, grad_tol=grad_tol, max_iter=max_iter
            )
            prev = fits[j]
        except (DataError, NonConvergence):
            failures += 1
            prev = None
    return fits, failures


def integrated_squared_error(fits, xgrid, interval=(0.0, 1.0)):
    """Midpoint-rule integral of squared geodesic error along the spiral."""
    a, b = interval
    step = (b - a) / len(xgrid)
    total = 0.0
    for j, x0 in enumerate(xgrid):
        if not np.all(np.isfinite(fits[j])):
            return np.nan
        total += geodesic_distance(fits[j], spiral_truth(x0)) ** 2
    return total * step


def mise(
    method,
    bandwidth,
    runs,
    n,
    noise_var,
    xgrid,
    seed=0,
    kernel=EPANECHNIKOV,
    grad_tol=1e-9,
):
    """Mean integrated squared error of a sphere smoother over many runs.

    ``method`` is 'lf', 'nw', or a callable (sample, xgrid) -> (runs x 3)
    fits (used for oracle checks in the tests).  Runs with any failed fit
    contribute NaN and are excluded from the mean; the failure count is
    returned alongside.
    """
    errors = np.empty(runs)
    failures = 0
    for r in range(runs):
        sample = simulate_sphere(n, noise_var, seed=[seed, r])
        if callable(method):
            fits = np.asarray([method(sample, x0) for x0 in xgrid])
            fcount = 0
        else:
            fits, fcount = fit_sphere_curve(
                sample.x,
                sample.y,
                xgrid,
                bandwidth,
                method=method,
                kernel=kernel,
                grad_tol=grad_tol,
            )
        failures += fcount
        errors[r] = integrated_squared_error(fits, xgrid)
    valid = errors[np.isfinite(errors)]
    if valid.size == 0:
        return np.nan, failures
    return float(valid.mean()), failures
