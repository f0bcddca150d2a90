"""Command-line interface: fit, simulate, permtest, cv, rates.

Exit codes: 0 on success, 1 on data errors, 2 on solver non-convergence.
Options left unset fall back to values from --config (JSON or TOML).
"""

import csv
import dataclasses
import functools
import json
import pathlib
import sys

import click
import numpy as np

from . import dataio, harness, inference
from .errors import DataError, FrechetError, NonConvergence
from .kernels import get_kernel
from .regression import GlobalFitter, LocalFitter, NWFitter
from .spaces import (
    CorrelationSpace,
    EuclideanSpace,
    SphereSpace,
    WassersteinSpace,
)

SPACES = ("euclidean", "wasserstein", "correlation", "sphere")


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NonConvergence as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (DataError, FrechetError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _load_config(path):
    if path is None:
        return {}
    p = pathlib.Path(path)
    if p.suffix == ".toml":
        import tomllib

        return tomllib.loads(p.read_text())
    return json.loads(p.read_text())


def _merged(config_path, **options):
    cfg = _load_config(config_path)
    return {k: cfg.get(k) if v is None else v for k, v in options.items()}


def _emit(payload, out):
    text = json.dumps(payload, indent=2, default=_jsonable)
    if out:
        pathlib.Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _load_space_data(space, data, p, r):
    if space == "euclidean":
        X, Y = dataio.load_euclidean_csv(data, p)
        return EuclideanSpace(), X, Y
    if space == "wasserstein":
        X, Q, grid = dataio.load_wasserstein_csv(data, p)
        return WassersteinSpace(grid), X, Q
    if space == "correlation":
        X, mats = dataio.load_correlation_csv(data, p, r)
        return CorrelationSpace(), X, mats
    if space == "sphere":
        X, Y = dataio.load_sphere_csv(data, p)
        return SphereSpace(), X, Y
    raise DataError(f"unknown space {space!r}")


def _make_fitter(method, h, kernel):
    kern = get_kernel(kernel)
    if method == "global":
        return GlobalFitter()
    if method in ("local", "nw"):
        if h is None:
            raise DataError(f"method {method!r} requires a bandwidth (--h)")
        return LocalFitter(h, kern) if method == "local" else NWFitter(h, kern)
    raise DataError(f"unknown method {method!r}")


@click.group()
def main():
    """Frechet regression for metric-space-valued responses."""


@main.command()
@click.option("--space", type=click.Choice(SPACES), required=True)
@click.option("--method", type=click.Choice(["global", "local", "nw"]), default=None)
@click.option("--data", required=True, type=click.Path())
@click.option("--at", "at_", required=True, help="target point, comma-separated")
@click.option("--p", type=int, default=None, help="number of predictor columns")
@click.option("--r", type=int, default=None, help="correlation matrix size")
@click.option("--h", type=float, default=None, help="bandwidth for local/nw")
@click.option("--kernel", default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def fit(space, method, data, at_, p, r, h, kernel, config_path, seed, out):
    """Fit a regression on CSV data and report the estimate at a point."""
    opts = _merged(
        config_path, method=method, p=p, r=r, h=h, kernel=kernel
    )
    method = opts["method"] or "global"
    p = opts["p"] or 1
    kernel = opts["kernel"] or "epanechnikov"
    h = opts["h"]
    sp, X, Y = _load_space_data(space, data, p, opts["r"])
    fitter = _make_fitter(method, h, kernel)
    x = np.array([float(v) for v in at_.split(",")])
    if x.shape != (p,):
        raise DataError(f"--at must have {p} coordinate(s), got {x.size}")
    estimate = fitter(sp, X, Y, x if p > 1 else x[0])
    _emit(
        {
            "space": space,
            "method": method,
            "at": x.tolist(),
            "estimate": np.asarray(estimate).tolist(),
        },
        out,
    )


@main.command()
@click.option("--space", type=click.Choice(["wasserstein", "sphere"]), default=None)
@click.option("--preset", type=click.Choice(sorted(harness.PRESETS)), required=True)
@click.option("--n", "n_values", type=int, multiple=True)
@click.option("--runs", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None, help="output directory")
@_handle_errors
def simulate(space, preset, n_values, runs, seed, config_path, out):
    """Run a preconfigured simulation experiment and emit records + summary."""
    opts = _merged(config_path, runs=runs, seed=seed)
    config = harness.preset_config(
        preset,
        n=tuple(n_values) or None,
        runs=opts["runs"],
        seed=opts["seed"] if opts["seed"] is not None else 0,
    )
    if space and space != config.space:
        raise DataError(f"preset {preset!r} is for space {config.space!r}")
    if config.space == "wasserstein":
        records, summary = harness.run_wasserstein_experiment(config)
    else:
        records, summary = harness.run_sphere_experiment(config)
    if out:
        outdir = pathlib.Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "records.csv", "w", newline="") as fh:
            writer = csv.DictWriter(
                fh,
                fieldnames=[
                    "method",
                    "n",
                    "run",
                    "error",
                    "bandwidth",
                    "wall_time",
                    "failures",
                ],
            )
            writer.writeheader()
            for rec in records:
                writer.writerow(dataclasses.asdict(rec))
        (outdir / "summary.json").write_text(
            json.dumps(summary, indent=2, default=_jsonable) + "\n"
        )
        click.echo(f"wrote {len(records)} records to {outdir}")
    else:
        _emit(summary, None)


@main.command()
@click.option("--space", type=click.Choice(SPACES), required=True)
@click.option("--data", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["global", "local", "nw"]), default=None)
@click.option("--B", "n_perm", type=int, default=None)
@click.option("--p", type=int, default=None)
@click.option("--r", type=int, default=None)
@click.option("--h", type=float, default=None)
@click.option("--kernel", default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def permtest(space, data, method, n_perm, p, r, h, kernel, config_path, seed, out):
    """Permutation test of no predictor effect."""
    opts = _merged(
        config_path, method=method, n_perm=n_perm, p=p, r=r, h=h, kernel=kernel
    )
    sp, X, Y = _load_space_data(space, data, opts["p"] or 1, opts["r"])
    fitter = _make_fitter(
        opts["method"] or "global", opts["h"], opts["kernel"] or "epanechnikov"
    )
    result = inference.permutation_test(
        sp, X, Y, fitter, B=opts["n_perm"] or 199, seed=seed
    )
    _emit(
        {
            "space": space,
            "statistic": result.observed_stat,
            "p_value": result.p_value,
            "permutations": len(result.null_stats),
        },
        out,
    )


@main.command()
@click.option("--space", type=click.Choice(SPACES), required=True)
@click.option("--data", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["global", "local", "nw"]), default=None)
@click.option("--k", type=int, default=None)
@click.option("--repeats", type=int, default=None)
@click.option("--p", type=int, default=None)
@click.option("--r", type=int, default=None)
@click.option("--h", type=float, default=None)
@click.option("--kernel", default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def cv(space, data, method, k, repeats, p, r, h, kernel, config_path, seed, out):
    """k-fold cross-validated prediction error."""
    opts = _merged(
        config_path, method=method, k=k, repeats=repeats, p=p, r=r, h=h, kernel=kernel
    )
    sp, X, Y = _load_space_data(space, data, opts["p"] or 1, opts["r"])
    fitter = _make_fitter(
        opts["method"] or "global", opts["h"], opts["kernel"] or "epanechnikov"
    )
    mspe = inference.cv_prediction_error(
        sp, X, Y, fitter, k=opts["k"] or 5, repeats=opts["repeats"] or 1, seed=seed
    )
    _emit({"space": space, "mspe": mspe}, out)


@main.command()
@click.option(
    "--space", type=click.Choice(["euclidean", "wasserstein"]), required=True
)
@click.option("--n", "n_values", type=int, multiple=True, required=True)
@click.option("--runs", type=int, default=100)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def rates(space, n_values, runs, seed, out):
    """Empirical log-log rate of the global fit's pointwise error."""
    slope, medians = harness.run_rate_check(space, list(n_values), runs, seed)
    _emit({"space": space, "slope": slope, "median_sq_error": medians}, out)


if __name__ == "__main__":
    main()
