import numpy as np
import pytest
from scipy.integrate import quad

from frechetreg.errors import ParameterDomain
from frechetreg.kernels import EPANECHNIKOV, GAUSSIAN, UNIFORM, get_kernel

ALL = [EPANECHNIKOV, GAUSSIAN, UNIFORM]


@pytest.mark.parametrize("kernel", ALL)
def test_symmetry_and_nonnegativity(kernel):
    u = np.linspace(-3, 3, 301)
    assert np.allclose(kernel(u), kernel(-u))
    assert np.all(kernel(u) >= 0)


@pytest.mark.parametrize("kernel", ALL)
def test_integrates_to_one(kernel):
    val, _ = quad(lambda u: float(kernel(np.array([u]))[0]), -10, 10, limit=200)
    assert abs(val - 1.0) < 1e-6


@pytest.mark.parametrize("kernel", ALL)
def test_scaled_form(kernel):
    u = np.linspace(-2, 2, 41)
    for h in (0.3, 1.0, 2.5):
        assert np.allclose(kernel.kh(u, h), kernel(u / h) / h)


def test_epanechnikov_values():
    assert EPANECHNIKOV(np.array([0.0]))[0] == pytest.approx(0.75)
    assert EPANECHNIKOV(np.array([1.0]))[0] == 0.0
    assert EPANECHNIKOV(np.array([2.0]))[0] == 0.0


def test_registry():
    assert get_kernel("epanechnikov") is EPANECHNIKOV
    assert get_kernel("gaussian") is GAUSSIAN
    assert get_kernel("uniform") is UNIFORM
    with pytest.raises(ParameterDomain):
        get_kernel("triangle")
    assert get_kernel(GAUSSIAN) is GAUSSIAN
