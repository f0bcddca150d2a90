"""Exception hierarchy shared across the package."""


class FrechetError(Exception):
    """Base class for all package errors."""


class DataError(FrechetError):
    """Invalid or malformed input data."""


class CovarianceSingular(DataError):
    """Predictor sample covariance is (numerically) singular."""

    def __init__(self, eigenvalue, threshold):
        self.eigenvalue = eigenvalue
        self.threshold = threshold
        super().__init__(
            f"sample covariance is singular: smallest eigenvalue "
            f"{eigenvalue:.3e} <= threshold {threshold:.3e}"
        )


class BandwidthTooSmall(DataError):
    """Local-linear moment matrix degenerated inside the kernel window."""

    def __init__(self, effective_count, h):
        self.effective_count = effective_count
        self.h = h
        super().__init__(
            f"bandwidth h={h:g} leaves only {effective_count} effective "
            f"observation(s) in the window; local weights are degenerate"
        )


class EmptyWindow(DataError):
    """No observation receives positive kernel weight."""


class GridMismatch(DataError):
    """Quantile functions defined on different grids."""


class DimensionMismatch(DataError):
    """Array shapes are incompatible."""


class ParameterDomain(DataError):
    """Simulation or model parameters outside their admissible domain."""


class NotPositiveDefinite(DataError):
    """Matrix expected to be strictly positive definite is not."""


class AntipodalPoint(DataError):
    """Log map requested at (numerically) antipodal points."""


class DegenerateResponse(DataError):
    """Responses are constant; Frechet variance is zero."""


class NonConvergence(FrechetError):
    """Iterative solver failed to converge."""

    def __init__(self, message, residual=None, diagnostics=None):
        self.residual = residual
        self.diagnostics = diagnostics or {}
        super().__init__(message)
