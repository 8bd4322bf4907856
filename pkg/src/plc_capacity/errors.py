"""Exception types shared across the package."""


class ModelError(ValueError):
    """Invalid channel or noise model construction."""


class SingularHeadTapError(ModelError):
    """A shaping filter's lag-zero tap is not safely invertible."""


class ConfigError(ValueError):
    """Invalid scenario configuration document."""


class SingularNoiseError(RuntimeError):
    """Noise spectral density is singular or indefinite at some frequency."""


class DivergentIntegralError(RuntimeError):
    """A log-determinant integrand diverged at a quadrature node."""

    def __init__(self, message: str, omega: float | None = None):
        super().__init__(message)
        self.omega = omega


class NumericalError(RuntimeError):
    """An eigenvalue or factorization result fell outside tolerated bounds."""
