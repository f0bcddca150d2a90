"""Reproducible simulation experiments and rate checks.

Each experiment expands a root seed into per-run seeds by a counter, so
run r always sees the same data no matter how many runs are requested or
how many workers execute them.  Set FRECHET_THREADS > 1 to run replicates
in a process pool; results are reduced in run order either way.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .design import PredictorMatrix, global_weights, nw_weights
from .errors import DataError, ParameterDomain
from .kernels import EPANECHNIKOV
from .spaces import wasserstein as wass
from .spaces import sphere as sph

NW_BANDWIDTHS = tuple(np.round(np.arange(0.2, 0.7001, 0.05), 4))
SPHERE_BANDWIDTHS = tuple(np.round(np.arange(0.05, 0.3001, 0.01), 4))


@dataclass
class ExperimentConfig:
    """Declarative experiment description; JSON round-trippable."""

    space: str
    setting: str = "setting1"
    n: tuple = (50, 100, 200)
    runs: int = 200
    seed: int = 0
    grid_size: int = 1000
    noise_var: float = 0.2
    bandwidths: tuple = ()
    x_nodes: int = 50
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.n = tuple(int(v) for v in np.atleast_1d(self.n))
        self.bandwidths = tuple(float(h) for h in self.bandwidths)
        if self.runs < 1 or self.grid_size < 2 or self.x_nodes < 2:
            raise ParameterDomain("runs, grid_size and x_nodes must be positive")
        if any(v < 1 for v in self.n):
            raise ParameterDomain("sample sizes must be positive")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass
class RunRecord:
    method: str
    n: int
    run: int
    error: float
    bandwidth: float | None = None
    wall_time: float = 0.0
    failures: int = 0


PRESETS = {
    "setting1": dict(space="wasserstein", setting="setting1", bandwidths=NW_BANDWIDTHS),
    "setting2": dict(space="wasserstein", setting="setting2", bandwidths=NW_BANDWIDTHS),
    # Noise levels 0.2 and 0.35 are standard deviations of the tangent
    # noise components; noise_var stores their squares.
    "table1-low": dict(
        space="sphere", setting="table1", noise_var=0.04, bandwidths=SPHERE_BANDWIDTHS
    ),
    "table1-high": dict(
        space="sphere", setting="table1", noise_var=0.1225, bandwidths=SPHERE_BANDWIDTHS
    ),
}


def preset_config(name, **overrides):
    if name not in PRESETS:
        raise DataError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    merged = {**PRESETS[name], **{k: v for k, v in overrides.items() if v is not None}}
    return ExperimentConfig(**merged)


def _pool_map(fn, args_list):
    workers = int(os.environ.get("FRECHET_THREADS", "1") or 1)
    if workers > 1 and len(args_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, args_list))
    return [fn(a) for a in args_list]


def _quartile_summary(errors):
    errors = np.asarray(errors, dtype=float)
    valid = errors[np.isfinite(errors)]
    if valid.size == 0:
        return {"median": np.nan, "q1": np.nan, "q3": np.nan, "mean": np.nan}
    return {
        "median": float(np.median(valid)),
        "q1": float(np.percentile(valid, 25)),
        "q3": float(np.percentile(valid, 75)),
        "mean": float(valid.mean()),
    }


# ---------------------------------------------------------------------------
# Wasserstein experiment (location-scale and transport settings)
# ---------------------------------------------------------------------------


def _wasserstein_fit_curve(x_obs, quantiles, xgrid):
    """Global Frechet fits at every node, via one weight solve per node."""
    pm = PredictorMatrix(x_obs)
    fits = np.empty((len(xgrid), quantiles.shape[1]))
    for j, x0 in enumerate(xgrid):
        w = global_weights(pm, x0)
        fits[j] = wass.fit_distribution(w.values, quantiles)
    return fits


def _wasserstein_run(args):
    (run, setting, n, seed, grid_size, bandwidths, x_nodes, params) = args
    t0 = time.perf_counter()
    grid = wass.QuantileGrid(grid_size)
    simulate = (
        wass.simulate_setting1 if setting == "setting1" else wass.simulate_setting2
    )
    sample = simulate(n, seed=[seed, run], grid=grid, **params)
    xgrid = wass.midpoint_grid(-1.0, 1.0, x_nodes)
    step = 2.0 / x_nodes

    truth_params = {
        k: v
        for k, v in params.items()
        if k in ("mu0", "beta", "sigma0", "gamma")
    }
    truths = np.array(
        [wass.true_quantile_curve(x0, grid, **truth_params) for x0 in xgrid]
    )

    def curve_ise(fits):
        return float(
            np.sum(np.mean((fits - truths) ** 2, axis=1)) * step
        )

    out = {"run": run, "n": n}
    out["gfr"] = curve_ise(_wasserstein_fit_curve(sample.x, sample.quantiles, xgrid))

    if setting == "setting1":
        oracle = wass.oracle_regression_setting1(sample)
        out["oracle"] = curve_ise(np.array([oracle(x0) for x0 in xgrid]))

    nw_errors = {}
    for h in bandwidths:
        fits = np.empty_like(truths)
        failed = False
        for j, x0 in enumerate(xgrid):
            try:
                w = nw_weights(sample.x, x0, h, EPANECHNIKOV)
            except DataError:
                failed = True
                break
            fits[j] = wass.fit_distribution(w.values, sample.quantiles)
        nw_errors[h] = np.nan if failed else curve_ise(fits)
    out["nw"] = nw_errors
    out["wall_time"] = time.perf_counter() - t0
    return out


def run_wasserstein_experiment(config: ExperimentConfig):
    """Run the distribution-response experiment; returns (records, summary).

    For each sample size: global Frechet fits, the parametric oracle
    (setting 1 only) and Nadaraya-Watson over the bandwidth grid, with
    per-run integrated squared errors against the noise-free truth.  The
    NW bandwidth reported in the summary minimizes the mean ISE over all
    runs, and NW records are kept for every grid bandwidth.
    """
    records = []
    summary = {"config": config.to_dict(), "methods": {}}
    for n in config.n:
        args = [
            (
                run,
                config.setting,
                n,
                config.seed,
                config.grid_size,
                config.bandwidths,
                config.x_nodes,
                config.params,
            )
            for run in range(config.runs)
        ]
        results = _pool_map(_wasserstein_run, args)
        gfr = [r["gfr"] for r in results]
        for r in results:
            records.append(
                RunRecord(
                    method="gfr",
                    n=n,
                    run=r["run"],
                    error=r["gfr"],
                    wall_time=r["wall_time"],
                )
            )
            if "oracle" in r:
                records.append(
                    RunRecord(method="oracle", n=n, run=r["run"], error=r["oracle"])
                )
            for h, err in r["nw"].items():
                records.append(
                    RunRecord(method="nw", n=n, run=r["run"], error=err, bandwidth=h)
                )
        per_n = {"gfr": _quartile_summary(gfr)}
        if config.setting == "setting1":
            per_n["oracle"] = _quartile_summary([r["oracle"] for r in results])
        if config.bandwidths:
            mean_by_h = {
                h: np.nanmean([r["nw"][h] for r in results])
                for h in config.bandwidths
            }
            best_h = min(mean_by_h, key=lambda h: mean_by_h[h])
            per_n["nw"] = _quartile_summary([r["nw"][best_h] for r in results])
            per_n["nw"]["best_bandwidth"] = float(best_h)
            per_n["nw"]["mean_by_bandwidth"] = {
                float(h): float(v) for h, v in mean_by_h.items()
            }
        summary["methods"][n] = per_n
    return records, summary


# ---------------------------------------------------------------------------
# Sphere experiment (Table-1-style MISE over a bandwidth grid)
# ---------------------------------------------------------------------------


def _sphere_run(args):
    (run, n, noise_var, seed, bandwidths, x_nodes) = args
    t0 = time.perf_counter()
    sample = sph.simulate_sphere(n, noise_var, seed=[seed, run])
    xgrid = wass.midpoint_grid(0.0, 1.0, x_nodes)
    out = {"run": run, "n": n, "errors": {}, "failures": 0}
    for method in ("lf", "nw"):
        for h in bandwidths:
            fits, fcount = sph.fit_sphere_curve(
                sample.x, sample.y, xgrid, h, method=method, grad_tol=1e-7
            )
            out["failures"] += fcount
            out["errors"][(method, h)] = sph.integrated_squared_error(fits, xgrid)
    out["wall_time"] = time.perf_counter() - t0
    return out


def run_sphere_experiment(config: ExperimentConfig):
    """Sphere spiral experiment; returns (records, summary).

    For each sample size, local Frechet and Nadaraya-Watson fits over the
    bandwidth grid; the summary reports the MISE for every bandwidth plus
    the minimizing bandwidth and MISE per method.
    """
    records = []
    summary = {"config": config.to_dict(), "methods": {}}
    for n in config.n:
        args = [
            (run, n, config.noise_var, config.seed, config.bandwidths, config.x_nodes)
            for run in range(config.runs)
        ]
        results = _pool_map(_sphere_run, args)
        per_n = {}
        for method in ("lf", "nw"):
            mise_by_h = {}
            for h in config.bandwidths:
                errors = [r["errors"][(method, h)] for r in results]
                for r in results:
                    records.append(
                        RunRecord(
                            method=method,
                            n=n,
                            run=r["run"],
                            error=r["errors"][(method, h)],
                            bandwidth=h,
                            wall_time=r["wall_time"],
                            failures=r["failures"],
                        )
                    )
                valid = np.asarray(errors)[np.isfinite(errors)]
                mise_by_h[h] = float(valid.mean()) if valid.size else np.nan
            finite = {h: v for h, v in mise_by_h.items() if np.isfinite(v)}
            best_h = min(finite, key=lambda h: finite[h])
            per_n[method] = {
                "mise_by_bandwidth": {float(h): v for h, v in mise_by_h.items()},
                "best_bandwidth": float(best_h),
                "min_mise": finite[best_h],
            }
        summary["methods"][n] = per_n
    return records, summary


# ---------------------------------------------------------------------------
# Empirical convergence-rate check
# ---------------------------------------------------------------------------


def _rate_run_euclidean(args):
    run, n, seed = args
    rng = np.random.default_rng([seed, run])
    x = rng.uniform(-1.0, 1.0, size=n)
    y = 1.0 + 2.0 * x + rng.standard_normal(n)
    x0 = 0.5
    from .hilbert import closed_form_global

    pred = closed_form_global(x, y, x0)
    return float((pred - (1.0 + 2.0 * x0)) ** 2)


def _rate_run_wasserstein(args):
    run, n, seed = args
    grid = wass.QuantileGrid(250)
    sample = wass.simulate_setting2(n, seed=[seed, run], grid=grid)
    x0 = 0.5
    pm = PredictorMatrix(sample.x)
    w = global_weights(pm, x0)
    fit = wass.fit_distribution(w.values, sample.quantiles)
    truth = wass.true_quantile_curve(x0, grid)
    return wass.wasserstein_distance(fit, truth) ** 2


_RATE_RUNNERS = {
    "euclidean": _rate_run_euclidean,
    "wasserstein": _rate_run_wasserstein,
}


def run_rate_check(space, n_list, runs=100, seed=0):
    """Log-log slope of median pointwise squared error against n.

    A parametric-rate method should give a slope near -1.  Raises
    DataError when the errors degenerate to zero (slope undefined).
    """
    if space not in _RATE_RUNNERS:
        raise DataError(f"rate check supports {sorted(_RATE_RUNNERS)}, got {space!r}")
    n_list = [int(v) for v in n_list]
    if len(n_list) < 3:
        raise DataError("need at least 3 sample sizes for a rate check")
    runner = _RATE_RUNNERS[space]
    medians = []
    for n in n_list:
        errors = _pool_map(runner, [(run, n, seed) for run in range(runs)])
        medians.append(np.median(errors))
    medians = np.asarray(medians)
    if np.any(medians <= 0):
        raise DataError("degenerate zero errors; rate slope undefined")
    slope = np.polyfit(np.log(n_list), np.log(medians), 1)[0]
    return float(slope), {int(n): float(m) for n, m in zip(n_list, medians)}
