"""Smoothing kernels used by the local and Nadaraya-Watson weights.

Each kernel is a symmetric probability density K with K(u) = K(-u) and
integral one; the scaled version is K_h(u) = K(u / h) / h.
"""

import numpy as np

from .errors import ParameterDomain


class Kernel:
    def __init__(self, name, func):
        self.name = name
        self._func = func

    def __call__(self, u):
        return self._func(np.asarray(u, dtype=float))

    def kh(self, u, h):
        """Evaluate the bandwidth-scaled kernel K_h(u) = K(u/h)/h."""
        if h <= 0:
            raise ParameterDomain(f"bandwidth must be positive, got {h!r}")
        return self(np.asarray(u, dtype=float) / h) / h

    def __repr__(self):
        return f"Kernel({self.name!r})"


def _epanechnikov(u):
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u ** 2), 0.0)


def _gaussian(u):
    return np.exp(-0.5 * u ** 2) / np.sqrt(2.0 * np.pi)


def _uniform(u):
    return np.where(np.abs(u) <= 1.0, 0.5, 0.0)


EPANECHNIKOV = Kernel("epanechnikov", _epanechnikov)
GAUSSIAN = Kernel("gaussian", _gaussian)
UNIFORM = Kernel("uniform", _uniform)

_KERNELS = {k.name: k for k in (EPANECHNIKOV, GAUSSIAN, UNIFORM)}


def get_kernel(name):
    """Look up a kernel by name ('epanechnikov', 'gaussian', 'uniform')."""
    if isinstance(name, Kernel):
        return name
    try:
        return _KERNELS[name.lower()]
    except KeyError:
        raise ParameterDomain(
            f"unknown kernel {name!r}; choose from {sorted(_KERNELS)}"
        ) from None
