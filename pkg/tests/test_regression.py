import numpy as np
import pytest

import oracles
from frechetreg.errors import DataError
from frechetreg.kernels import EPANECHNIKOV
from frechetreg.regression import (
    GlobalFitter,
    LocalFitter,
    NWFitter,
    fit_global,
    fit_local,
    fit_nw,
)
from frechetreg.spaces import (
    CorrelationSpace,
    EuclideanSpace,
    SphereSpace,
    WassersteinSpace,
)
from frechetreg.spaces.correlation import nearest_correlation
from frechetreg.spaces.sphere import unit
from frechetreg.spaces.wasserstein import QuantileGrid


def test_global_matches_ols_random():
    rng = np.random.default_rng(0)
    space = EuclideanSpace()
    for _ in range(30):
        X = rng.standard_normal((40, 2))
        y = rng.standard_normal(40)
        x0 = rng.standard_normal(2)
        got = fit_global(space, X, y, x0).estimate
        want = oracles.ols_prediction(X, y, x0)
        assert abs(got - want) < 1e-10


def test_local_matches_local_linear_random():
    rng = np.random.default_rng(1)
    space = EuclideanSpace()
    for _ in range(30):
        xs = rng.uniform(-1, 1, 50)
        y = np.sin(xs * 3) + rng.standard_normal(50) * 0.2
        x0 = rng.uniform(-0.5, 0.5)
        got = fit_local(space, xs, y, x0, 0.4).estimate
        want = oracles.local_linear_prediction(xs, y, x0, 0.4, EPANECHNIKOV)
        assert abs(got - want) < 1e-10


def test_nw_is_kernel_weighted_average():
    rng = np.random.default_rng(2)
    xs = rng.uniform(0, 1, 40)
    y = rng.standard_normal(40)
    kh = EPANECHNIKOV.kh(xs - 0.5, 0.3)
    want = kh @ y / kh.sum()
    got = fit_nw(EuclideanSpace(), xs, y, 0.5, 0.3).estimate
    assert abs(got - want) < 1e-12


def test_fit_at_mean_equals_frechet_mean_all_spaces():
    rng = np.random.default_rng(3)
    n = 12
    xs = rng.uniform(-1, 1, n)

    grid = QuantileGrid(50)
    quantiles = np.sort(rng.standard_normal((n, 50)), axis=1)
    corrs = []
    for _ in range(n):
        a = rng.standard_normal((3, 3))
        corrs.append(nearest_correlation((a + a.T) / 2 + 2 * np.eye(3)))
    points = np.abs(rng.standard_normal((n, 3)))
    points /= np.linalg.norm(points, axis=1, keepdims=True)

    cases = [
        (EuclideanSpace(), rng.standard_normal((n, 2))),
        (WassersteinSpace(grid), quantiles),
        (CorrelationSpace(), np.array(corrs)),
        (SphereSpace(), points),
    ]
    for space, ys in cases:
        at_mean = fit_global(space, xs, ys, xs.mean()).estimate
        plain = space.frechet_mean(ys)
        assert space.distance(at_mean, plain) < 1e-7


def test_identical_objects_returned_for_any_target():
    rng = np.random.default_rng(4)
    xs = rng.uniform(-1, 1, 10)
    y0 = unit(np.array([1.0, 2.0, 2.0]))
    ys = np.tile(y0, (10, 1))
    space = SphereSpace()
    for x0 in (-0.8, 0.0, 0.9):
        est = fit_global(space, xs, ys, x0).estimate
        assert space.distance(est, y0) < 1e-9


def test_weight_scale_invariance_of_argmin():
    # multiplying all weights by a positive constant leaves the argmin
    # unchanged in every space
    rng = np.random.default_rng(5)
    n = 10
    w = rng.uniform(0.2, 2.0, n)
    grid = QuantileGrid(40)
    quantiles = np.sort(rng.standard_normal((n, 40)), axis=1)
    points = np.abs(rng.standard_normal((n, 3)))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    corrs = []
    for _ in range(n):
        a = rng.standard_normal((3, 3))
        corrs.append(nearest_correlation((a + a.T) / 2 + 2 * np.eye(3)))
    cases = [
        (EuclideanSpace(), rng.standard_normal((n, 3))),
        (WassersteinSpace(grid), quantiles),
        (CorrelationSpace(), np.array(corrs)),
        (SphereSpace(), points),
    ]
    for space, ys in cases:
        a = space.weighted_mean(w, ys)
        b = space.weighted_mean(7.5 * w, ys)
        assert space.distance(a, b) < 1e-7


def test_fitters_match_function_forms():
    rng = np.random.default_rng(6)
    xs = rng.uniform(-1, 1, 30)
    y = rng.standard_normal(30)
    space = EuclideanSpace()
    assert GlobalFitter()(space, xs, y, 0.3) == pytest.approx(
        fit_global(space, xs, y, 0.3).estimate, abs=1e-14
    )
    assert LocalFitter(0.5)(space, xs, y, 0.3) == pytest.approx(
        fit_local(space, xs, y, 0.3, 0.5).estimate, abs=1e-14
    )
    assert NWFitter(0.5)(space, xs, y, 0.3) == pytest.approx(
        fit_nw(space, xs, y, 0.3, 0.5).estimate, abs=1e-14
    )


def test_global_fitter_vectorized_targets():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((25, 2))
    Y = rng.standard_normal((25, 4))
    targets = rng.standard_normal((6, 2))
    space = EuclideanSpace()
    batch = GlobalFitter().fit_at(space, X, Y, targets)
    for row, x0 in zip(batch, targets):
        assert np.allclose(row, fit_global(space, X, Y, x0).estimate, atol=1e-12)


def test_length_mismatch_raises():
    with pytest.raises(DataError):
        fit_global(EuclideanSpace(), np.arange(10.0), np.arange(9.0), 0.5)


def test_metric_axioms_random_triples():
    rng = np.random.default_rng(8)
    grid = QuantileGrid(30)
    spaces = {
        "euclidean": (EuclideanSpace(), lambda: rng.standard_normal(3)),
        "wasserstein": (
            WassersteinSpace(grid),
            lambda: np.sort(rng.standard_normal(30)),
        ),
        "sphere": (
            SphereSpace(),
            lambda: unit(rng.standard_normal(3)),
        ),
        "correlation": (
            CorrelationSpace(),
            lambda: nearest_correlation(
                (lambda a: (a + a.T) / 2 + 2 * np.eye(3))(
                    rng.standard_normal((3, 3))
                )
            ),
        ),
    }
    for space, draw in spaces.values():
        for _ in range(25):
            a, b, c = draw(), draw(), draw()
            dab = space.distance(a, b)
            assert dab >= 0
            assert abs(dab - space.distance(b, a)) < 1e-12
            assert space.distance(a, a) < 1e-7
            assert dab <= space.distance(a, c) + space.distance(c, b) + 1e-9
