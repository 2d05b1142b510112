"""Standard normal density, tails, quantile and tail-bracketing diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def _out(x):
    # scalar in, scalar out
    return float(x) if np.ndim(x) == 0 else x


def phi(x):
    """Standard normal density."""
    x = np.asarray(x, dtype=float)
    return _out(np.exp(-0.5 * x * x - _LOG_SQRT_2PI))


def log_phi(x):
    x = np.asarray(x, dtype=float)
    return _out(-0.5 * x * x - _LOG_SQRT_2PI)


def cdf(x):
    """Lower tail Phi(x)."""
    return _out(special.ndtr(np.asarray(x, dtype=float)))


def upper_tail(x):
    """Upper tail 1 - Phi(x), evaluated without cancellation for large x."""
    return _out(special.ndtr(-np.asarray(x, dtype=float)))


def log_upper_tail(x):
    """log(1 - Phi(x)); finite far beyond the underflow point of upper_tail."""
    return _out(special.log_ndtr(-np.asarray(x, dtype=float)))


def quantile(eta):
    """Upper-tail quantile z(eta), the x solving upper_tail(x) = eta.

    Starts from the library inverse CDF and applies two Newton steps on
    log(upper_tail) so that tiny eta keeps full relative accuracy.
    """
    e = np.asarray(eta, dtype=float)
    if np.any(~((e > 0) & (e < 1))):
        raise DomainError("quantile needs 0 < eta < 1")
    # 1 - e is exact for e >= 0.5, so use it on that branch
    x = np.where(e <= 0.5, -special.ndtri(np.minimum(e, 0.5)),
                 special.ndtri(np.where(e > 0.5, 1.0 - e, 0.5)))
    log_e = np.log(e)
    for _ in range(2):
        log_tail = special.log_ndtr(-x)
        # d/dx log tail = -phi/tail
        slope = -np.exp(-0.5 * x * x - _LOG_SQRT_2PI - log_tail)
        x = x - (log_tail - log_e) / slope
    return _out(x)


def inverse_cdf(u):
    """Lower-tail quantile Phi^{-1}(u); used to turn uniforms into normals."""
    return _out(special.ndtri(np.asarray(u, dtype=float)))


def mills_ratio(y):
    """y * upper_tail(y) / phi(y) for y > 0."""
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise DomainError("mills_ratio needs y > 0")
    return _out(y * np.exp(special.log_ndtr(-y) + 0.5 * y * y + _LOG_SQRT_2PI))


@dataclass(frozen=True)
class QuantileDiagnostics:
    """Defects of the two leading-order expansions of z(eta)."""

    eta: float
    z: float
    r1: float
    r2: float


def quantile_diagnostics(eta: float) -> QuantileDiagnostics:
    if not 0 < eta <= 0.01:
        raise DomainError("quantile_diagnostics needs 0 < eta <= 0.01")
    z = quantile(eta)
    L = np.log(1.0 / eta)
    r1 = float(np.sqrt(2 * L) - z)
    r2 = float(2 * L - np.log(L) - z * z)
    return QuantileDiagnostics(eta=float(eta), z=z, r1=r1, r2=r2)
