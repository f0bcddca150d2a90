import numpy as np
import pytest

from frechetreg.design import (
    PredictorMatrix,
    global_weights,
    local_weights,
    nw_weights,
)
from frechetreg.errors import (
    BandwidthTooSmall,
    CovarianceSingular,
    DataError,
    EmptyWindow,
)
from frechetreg.kernels import EPANECHNIKOV, GAUSSIAN


class TestPredictorMatrix:
    def test_rejects_too_few_rows(self):
        with pytest.raises(DataError):
            PredictorMatrix(np.random.default_rng(0).standard_normal((4, 3)))

    def test_rejects_nonfinite(self):
        X = np.ones((10, 2))
        X[3, 1] = np.nan
        with pytest.raises(DataError):
            PredictorMatrix(X)

    def test_rejects_singular_covariance(self):
        rng = np.random.default_rng(1)
        base = rng.standard_normal((20, 2))
        X = np.column_stack([base, base[:, 0] + base[:, 1]])
        with pytest.raises(CovarianceSingular) as exc:
            PredictorMatrix(X)
        assert exc.value.eigenvalue <= exc.value.threshold

    def test_covariance_normalized_by_n(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((30, 2))
        pm = PredictorMatrix(X)
        c = X - X.mean(axis=0)
        assert np.allclose(pm.cov, c.T @ c / 30)

    def test_accepts_1d_input(self):
        pm = PredictorMatrix(np.array([0.0, 1.0, 2.0, 3.0]))
        assert pm.p == 1


class TestGlobalWeights:
    def test_all_ones_at_mean(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((25, 3))
        w = global_weights(X, X.mean(axis=0))
        assert np.allclose(w.values, 1.0, atol=1e-12)

    def test_hand_evaluated_weights(self):
        # X = (0, 0, 1, 1), x = 1: Xbar = 0.5, Sigma = 0.25, so
        # w_i = 1 + (X_i - 0.5)(0.5)/0.25 giving (0, 0, 2, 2)
        w = global_weights(np.array([0.0, 0.0, 1.0, 1.0]), 1.0)
        assert np.allclose(w.values, [0.0, 0.0, 2.0, 2.0], atol=1e-12)

    def test_mean_one_and_moment_identity_random(self):
        rng = np.random.default_rng(4)
        for _ in range(1000):
            n = int(rng.integers(6, 40))
            p = int(rng.integers(1, 4))
            X = rng.standard_normal((n, p)) * rng.uniform(0.5, 3.0)
            x = rng.standard_normal(p) * 2.0
            w = global_weights(X, x)
            assert abs(w.values.mean() - 1.0) < 1e-12
            recon = w.values @ (X - X.mean(axis=0)) / n
            assert np.allclose(recon, x - X.mean(axis=0), atol=1e-10)

    def test_shape_mismatch(self):
        with pytest.raises(DataError):
            global_weights(np.random.default_rng(0).standard_normal((10, 2)), [1.0])


class TestLocalWeights:
    def test_symmetric_design_reduces_to_kernel_weights(self):
        xs = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
        w = local_weights(xs, 0.0, 2.0, EPANECHNIKOV)
        kh = EPANECHNIKOV.kh(xs, 2.0)
        assert np.allclose(w.values, kh / kh.mean(), atol=1e-12)

    def test_large_bandwidth_limit(self):
        w = local_weights(np.array([-1.0, 0.0, 1.0]), 0.0, 1e4, EPANECHNIKOV)
        assert np.allclose(w.values, 1.0, atol=1e-6)

    def test_moment_identities_random(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            n = int(rng.integers(5, 60))
            xs = rng.uniform(-1, 1, n)
            x = rng.uniform(-1, 1)
            h = rng.uniform(0.3, 2.0)
            kernel = GAUSSIAN if rng.integers(2) else EPANECHNIKOV
            try:
                w = local_weights(xs, x, h, kernel)
            except BandwidthTooSmall:
                continue
            assert abs(w.values.mean() - 1.0) < 1e-10
            assert abs(np.mean(w.values * (xs - x))) < 1e-10

    def test_degenerate_window(self):
        with pytest.raises(BandwidthTooSmall) as exc:
            local_weights(np.array([0.0, 1.0, 2.0]), 0.0, 0.05, EPANECHNIKOV)
        assert exc.value.effective_count < 2


class TestNWWeights:
    def test_nonnegative_and_mean_one(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            xs = rng.uniform(0, 1, 30)
            w = nw_weights(xs, rng.uniform(0, 1), 0.3, EPANECHNIKOV)
            assert np.all(w.values >= 0)
            assert abs(w.values.mean() - 1.0) < 1e-12

    def test_empty_window(self):
        with pytest.raises(EmptyWindow):
            nw_weights(np.array([0.0, 0.1]), 5.0, 0.2, EPANECHNIKOV)
