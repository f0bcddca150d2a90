import numpy as np
import pytest

import oracles
from frechetreg.errors import NotPositiveDefinite
from frechetreg.hilbert import (
    closed_form_global,
    closed_form_local,
    log_euclidean_local,
    sym_expm,
    sym_logm,
)
from frechetreg.kernels import EPANECHNIKOV
from frechetreg.regression import fit_global, fit_local
from frechetreg.spaces import EuclideanSpace


def test_global_interpolates_linear_relation():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((30, 2))
    a = rng.standard_normal(4)
    b = rng.standard_normal((2, 4))
    Y = a + (X - X.mean(axis=0)) @ b
    x0 = rng.standard_normal(2)
    got = closed_form_global(X, Y, x0)
    want = a + (x0 - X.mean(axis=0)) @ b
    assert np.allclose(got, want, atol=1e-10)


def test_global_at_mean_is_response_mean():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((25, 3))
    Y = rng.standard_normal((25, 5))
    got = closed_form_global(X, Y, X.mean(axis=0))
    assert np.allclose(got, Y.mean(axis=0), atol=1e-12)


def test_global_agrees_with_generic_solver():
    rng = np.random.default_rng(2)
    space = EuclideanSpace()
    for _ in range(20):
        X = rng.standard_normal((40, 3))
        Y = rng.standard_normal((40, 5))
        x0 = rng.standard_normal(3)
        closed = closed_form_global(X, Y, x0)
        generic = fit_global(space, X, Y, x0).estimate
        assert np.allclose(closed, generic, atol=1e-10)


def test_local_constant_responses():
    xs = np.linspace(0, 1, 20)
    Y = np.tile([2.0, -1.0], (20, 1))
    assert np.allclose(closed_form_local(xs, Y, 0.4, 0.3), [2.0, -1.0], atol=1e-12)


def test_local_matches_textbook_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        xs = rng.uniform(0, 1, 50)
        y = np.cos(4 * xs) + rng.standard_normal(50) * 0.3
        x0 = rng.uniform(0.2, 0.8)
        got = closed_form_local(xs, y, x0, 0.25)
        want = oracles.local_linear_prediction(xs, y, x0, 0.25, EPANECHNIKOV)
        assert abs(got - want) < 1e-10


def test_local_agrees_with_generic_solver():
    rng = np.random.default_rng(4)
    space = EuclideanSpace()
    for _ in range(20):
        xs = rng.uniform(0, 1, 40)
        Y = rng.standard_normal((40, 3))
        x0 = rng.uniform(0.2, 0.8)
        closed = closed_form_local(xs, Y, x0, 0.3)
        generic = fit_local(space, xs, Y, x0, 0.3).estimate
        assert np.allclose(closed, generic, atol=1e-10)


def random_spd(rng, r=3):
    a = rng.standard_normal((r, r))
    return a @ a.T + r * np.eye(r)


def test_matrix_log_exp_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(50):
        s = random_spd(rng)
        assert np.allclose(sym_expm(sym_logm(s)), s, atol=1e-9)


def test_logm_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        sym_logm(np.diag([1.0, -0.5, 2.0]))


def test_log_euclidean_identity_matrices():
    xs = np.linspace(0, 1, 15)
    Ys = np.array([np.eye(3)] * 15)
    out = log_euclidean_local(xs, Ys, 0.5, 0.4)
    assert np.allclose(out, np.eye(3), atol=1e-10)


def test_log_euclidean_commuting_family():
    # Ys = exp(c_i A) reduces to scalar smoothing of c_i in log space
    rng = np.random.default_rng(6)
    a = rng.standard_normal((3, 3))
    A = (a + a.T) / 2
    xs = rng.uniform(0, 1, 40)
    cs = 0.5 + 0.8 * xs + rng.standard_normal(40) * 0.1
    Ys = np.array([sym_expm(c * A) for c in cs])
    x0 = 0.5
    c_hat = oracles.local_linear_prediction(xs, cs, x0, 0.3, EPANECHNIKOV)
    got = log_euclidean_local(xs, Ys, x0, 0.3)
    assert np.allclose(got, sym_expm(c_hat * A), atol=1e-8)


def test_log_euclidean_output_spd():
    rng = np.random.default_rng(7)
    xs = rng.uniform(0, 1, 30)
    Ys = np.array([random_spd(rng) for _ in range(30)])
    out = log_euclidean_local(xs, Ys, 0.4, 0.35)
    assert np.allclose(out, out.T, atol=1e-10)
    assert np.linalg.eigvalsh(out)[0] > 0


def test_log_euclidean_equals_generic_on_logs():
    rng = np.random.default_rng(8)
    xs = rng.uniform(0, 1, 30)
    Ys = np.array([random_spd(rng) for _ in range(30)])
    logs = np.array([sym_logm(y).ravel() for y in Ys])
    x0 = 0.6
    generic = fit_local(EuclideanSpace(), xs, logs, x0, 0.3).estimate
    want = sym_expm(generic.reshape(3, 3))
    got = log_euclidean_local(xs, Ys, x0, 0.3)
    assert np.allclose(got, want, atol=1e-9)
