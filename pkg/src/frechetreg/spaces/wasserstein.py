"""One-dimensional distributions as discretized quantile functions.

Distributions are represented by their quantile function evaluated on the
equispaced grid u_j = (j - 1/2) / M, j = 1..M, which avoids the endpoints
of (0, 1).  Under the order-2 Wasserstein metric this representation makes
the geometry Euclidean up to the monotonicity constraint: the weighted
Frechet mean is the isotonic (nondecreasing) projection of the pointwise
weighted average of the quantile vectors.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats
from sklearn.isotonic import isotonic_regression

from . import ObjectSpace
from ..errors import DataError, GridMismatch, ParameterDomain

DEFAULT_GRID_SIZE = 1000


@dataclass(frozen=True)
class QuantileGrid:
    """Equispaced evaluation grid u_j = (j - 1/2) / M on (0, 1)."""

    m: int = DEFAULT_GRID_SIZE

    def __post_init__(self):
        if self.m < 2:
            raise ParameterDomain(f"grid size must be >= 2, got {self.m}")

    @property
    def points(self):
        return (np.arange(self.m) + 0.5) / self.m

    @property
    def normal_quantiles(self):
        """Standard normal quantiles on the grid."""
        return stats.norm.ppf(self.points)


def is_nondecreasing(values, tol=1e-12):
    values = np.asarray(values, dtype=float)
    return bool(np.all(np.diff(values) >= -tol))


def validate_quantile(values, tol=1e-12):
    """Check that ``values`` is a finite nondecreasing quantile vector."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DataError("quantile vector contains non-finite values")
    if not is_nondecreasing(values, tol):
        raise DataError("quantile vector is not nondecreasing")
    return values


def wasserstein_distance(q1, q2):
    """Order-2 Wasserstein distance between two quantile vectors.

    Midpoint-rule approximation of the L2 distance of quantile functions:
    sqrt(M^{-1} sum_j (q1_j - q2_j)^2).
    """
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    if q1.shape != q2.shape:
        raise GridMismatch(
            f"quantile grids differ: {q1.shape} vs {q2.shape}"
        )
    return float(np.sqrt(np.mean((q1 - q2) ** 2)))


def weighted_quantile_average(weights, qs):
    """Pointwise weighted mean of quantile vectors.

    The output may be non-monotone when weights are negative; it is the
    unconstrained minimizer that ``isotonic_projection`` then maps back
    into the space of quantile functions.
    """
    w = np.asarray(weights, dtype=float)
    Q = np.asarray(qs, dtype=float)
    if len(w) != len(Q):
        raise DataError("weights and quantile sample have different lengths")
    total = w.sum()
    if total <= 0:
        raise DataError("weights must have positive sum")
    return w @ Q / total


def isotonic_projection(g):
    """Euclidean projection of ``g`` onto nondecreasing vectors.

    This is the chain-constrained quadratic program argmin ||g - q||^2
    s.t. q_1 <= ... <= q_M, solved exactly by pool-adjacent-violators.
    """
    g = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(g)):
        raise DataError("projection input contains non-finite values")
    return isotonic_regression(g)


def fit_distribution(weights, qs):
    """Weighted Frechet mean in Wasserstein space.

    Works for global, local and Nadaraya-Watson weights alike: project
    the pointwise weighted average back onto monotone vectors.
    """
    return isotonic_projection(weighted_quantile_average(weights, qs))


class WassersteinSpace(ObjectSpace):
    """Wasserstein space of 1-D distributions on a fixed quantile grid."""

    def __init__(self, grid: QuantileGrid | int = DEFAULT_GRID_SIZE):
        self.grid = grid if isinstance(grid, QuantileGrid) else QuantileGrid(grid)

    def distance(self, a, b):
        return wasserstein_distance(a, b)

    def weighted_mean(self, weights, ys):
        return fit_distribution(weights, ys)

    def objective(self, weights, ys, omega):
        w = np.asarray(weights, dtype=float)
        diff = np.asarray(ys, float) - np.asarray(omega, float)
        return float(np.mean(w * np.mean(diff ** 2, axis=1)))


# ---------------------------------------------------------------------------
# Simulation of distribution-valued responses
# ---------------------------------------------------------------------------

#: Location-scale generator defaults (first simulation setting).
SETTING1_PARAMS = dict(mu0=0.0, beta=3.0, sigma0=3.0, gamma=0.5, v1=0.25, v2=1.0)
#: Transport-map setting defaults.
SETTING2_PARAMS = dict(mu0=0.0, beta=3.0, sigma0=3.0, gamma=0.5, v1=1.0, v2=2.0, l=2)


@dataclass
class DistributionSample:
    """Simulated sample: predictors, quantile rows and latent parameters."""

    x: np.ndarray
    quantiles: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray
    grid: QuantileGrid


def _check_location_scale_params(mu0, beta, sigma0, gamma, v1, v2):
    if sigma0 - abs(gamma) <= 0:
        raise ParameterDomain(
            f"sigma0 + gamma*x must stay positive on (-1, 1); "
            f"got sigma0={sigma0:g}, gamma={gamma:g}"
        )
    if v1 < 0 or v2 < 0:
        raise ParameterDomain(f"variances must be nonnegative: v1={v1}, v2={v2}")


def _draw_location_scale(n, rng, mu0, beta, sigma0, gamma, v1, v2):
    x = rng.uniform(-1.0, 1.0, size=n)
    mu_mean = mu0 + beta * x
    mu = mu_mean + np.sqrt(v1) * rng.standard_normal(n) if v1 > 0 else mu_mean
    scale_mean = sigma0 + gamma * x
    if v2 > 0:
        shape = scale_mean ** 2 / v2
        scale = v2 / scale_mean
        sigma = rng.gamma(shape, scale)
    else:
        sigma = scale_mean
    return x, mu, sigma


def simulate_setting1(n, seed=None, grid=None, **params):
    """Gaussian location-scale responses with linear parameter trends.

    mu | X ~ N(mu0 + beta X, v1), sigma | X ~ Gamma with mean
    sigma0 + gamma X and variance v2 (sigma0 + gamma X); the response
    quantile function is mu + sigma * Phi^{-1}.
    """
    p = {**SETTING1_PARAMS, **params}
    _check_location_scale_params(**p)
    grid = grid or QuantileGrid()
    rng = np.random.default_rng(seed)
    x, mu, sigma = _draw_location_scale(n, rng, **p)
    z = grid.normal_quantiles
    quantiles = mu[:, None] + sigma[:, None] * z
    return DistributionSample(x=x, quantiles=quantiles, mu=mu, sigma=sigma, grid=grid)


def transport_map(values, k):
    """Apply the increasing distortion T_k(y) = y - sin(k y)/|k| pointwise."""
    if k == 0:
        raise ParameterDomain("transport index k must be nonzero")
    return values - np.sin(k * values) / abs(k)


def simulate_setting2(n, seed=None, grid=None, **params):
    """Location-scale responses distorted by random transport maps.

    After drawing (mu, sigma) as in setting 1, a random index k is drawn
    uniformly from {-l, ..., l} \\ {0} per observation and T_k is applied
    to the quantile values.  T_k is nondecreasing, so the output stays a
    valid quantile vector.
    """
    p = {**SETTING2_PARAMS, **params}
    l = int(p.pop("l"))
    if l < 1:
        raise ParameterDomain(f"transport range l must be >= 1, got {l}")
    _check_location_scale_params(**p)
    grid = grid or QuantileGrid()
    rng = np.random.default_rng(seed)
    x, mu, sigma = _draw_location_scale(n, rng, **p)
    z = grid.normal_quantiles
    quantiles = mu[:, None] + sigma[:, None] * z
    ks = np.concatenate([np.arange(-l, 0), np.arange(1, l + 1)])
    k_draws = rng.choice(ks, size=n)
    for i in range(n):
        quantiles[i] = transport_map(quantiles[i], k_draws[i])
    return DistributionSample(x=x, quantiles=quantiles, mu=mu, sigma=sigma, grid=grid)


def true_quantile_curve(x, grid=None, mu0=0.0, beta=3.0, sigma0=3.0, gamma=0.5):
    """Noise-free regression quantile mu0 + beta x + (sigma0 + gamma x) Phi^{-1}."""
    grid = grid or QuantileGrid()
    return mu0 + beta * x + (sigma0 + gamma * x) * grid.normal_quantiles


def midpoint_grid(a, b, k):
    """k midpoint nodes of an equispaced partition of [a, b]."""
    edges = np.linspace(a, b, k + 1)
    return 0.5 * (edges[:-1] + edges[1:])


def ise(fit, truth, xgrid, interval=(-1.0, 1.0)):
    """Integrated squared Wasserstein error of ``fit`` against ``truth``.

    Midpoint-rule approximation over ``xgrid`` (assumed to be midpoint
    nodes of an equispaced partition of ``interval``); ``fit`` and
    ``truth`` map x to a quantile vector.
    """
    a, b = interval
    step = (b - a) / len(xgrid)
    total = 0.0
    for x in xgrid:
        total += wasserstein_distance(fit(x), truth(x)) ** 2
    return total * step


# ---------------------------------------------------------------------------
# Oracle linear regression on the latent (mu, sigma) pairs
# ---------------------------------------------------------------------------

_POSITIVITY_EPS = 1e-6


def _constrained_positive_line(x, y, eps=_POSITIVITY_EPS):
    """Least-squares line a + b x constrained positive at x = -1 and x = 1.

    Active-set over the two endpoint constraints: try the unconstrained
    fit, then each single constraint pinned at ``eps``, then both; return
    the feasible candidate with smallest residual sum of squares.
    """
    A = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    candidates = []
    a, b = coef
    if a - abs(b) >= 0:
        candidates.append((a, b))
    for s in (-1.0, 1.0):
        # pin a + s b = eps, minimize over b
        xs = x - s
        denom = xs @ xs
        if denom > 0:
            b_c = (y - eps) @ xs / denom
            a_c = eps - s * b_c
            if a_c + (-s) * b_c >= 0:  # other endpoint feasible
                candidates.append((a_c, b_c))
    candidates.append((eps, 0.0))
    best = min(candidates, key=lambda ab: np.sum((y - A @ ab) ** 2))
    return np.array(best)


def oracle_regression_setting1(sample: DistributionSample):
    """Best-case parametric regression using the latent (mu, sigma) pairs.

    Regresses mu and sigma linearly on x (the sigma line constrained
    positive on [-1, 1]) and predicts the Gaussian quantile function
    muhat(x) + sigmahat(x) Phi^{-1}.  Returns a callable x -> quantile
    vector.
    """
    x = sample.x
    A = np.column_stack([np.ones_like(x), x])
    mu_coef, *_ = np.linalg.lstsq(A, sample.mu, rcond=None)
    sig_coef = _constrained_positive_line(x, sample.sigma)
    z = sample.grid.normal_quantiles

    def predict(x0):
        mu_hat = mu_coef[0] + mu_coef[1] * x0
        sig_hat = sig_coef[0] + sig_coef[1] * x0
        return mu_hat + sig_hat * z

    return predict
