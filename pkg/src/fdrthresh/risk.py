"""Exact scalar risk kernels for thresholding and Monte Carlo vector risk."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, special

from .balls import Configuration
from .boundary import FdrBoundary
from .errors import DomainError
from .estimators import STEP_UP, estimate, hard_threshold
from .gauss import cdf, phi, upper_tail
from .rng import replicate_normals


@dataclass(frozen=True)
class RiskDecomposition:
    """Scalar hard-threshold risk split into a missed-signal part D and an exceedance part E."""

    D: float
    E: float
    total: float


@dataclass(frozen=True)
class RiskReport:
    mean_loss: float
    std_error: float
    replicates: int
    loss_exponent: float
    estimator: str
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def abs_moment(r: float) -> float:
    """c_r = E|Z|^r."""
    return float(2 ** (r / 2) * special.gamma((r + 1) / 2) / np.sqrt(np.pi))


def _upper_abs_moment(a: float, r: float) -> float:
    """Integral of |z|^r phi(z) over z > a."""
    half = 0.5 * abs_moment(r)
    tail = half * special.gammaincc((r + 1) / 2, 0.5 * a * a)
    return float(tail if a >= 0 else 2 * half - tail)


def hard_risk_exact(t: float, mu: float, r: float = 2.0) -> RiskDecomposition:
    """E|eta_H(mu + z, t) - mu|^r for a single coordinate."""
    if not t > 0:
        raise DomainError("threshold must be positive")
    D = abs(mu) ** r * (cdf(t - mu) - cdf(-t - mu))
    E = _upper_abs_moment(t - mu, r) + _upper_abs_moment(t + mu, r)
    return RiskDecomposition(D=float(D), E=E, total=float(D + E))


def covariance_kernel_xi(t: float, mu: float) -> float:
    """E[z (eta_H(mu + z, t) - mu)], in closed form."""
    if not t > 0:
        raise DomainError("threshold must be positive")
    return float(t * (phi(t - mu) + phi(t + mu)) + upper_tail(t - mu) + cdf(-t - mu))


def _quad(f, lo, hi, points=None):
    val, _ = integrate.quad(f, lo, hi, points=points, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def psi_r(a: float, r: float) -> float:
    """E[|a + z|^r - |a|^r - |z|^r]; identically zero when r = 2."""
    f = lambda z: abs(a + z) ** r * phi(z)
    # split at the kink z = -a, and keep the range wide enough for any a
    lo, hi = min(-a, 0.0) - 40.0, max(-a, 0.0) + 40.0
    moment = _quad(f, lo, -a) + _quad(f, -a, hi)
    return float(moment - abs(a) ** r - abs_moment(r))


def xi_r(t: float, mu: float, r: float) -> float:
    """l_r analogue of the covariance kernel; equals 2 * covariance_kernel_xi when r = 2."""
    if not t > 0:
        raise DomainError("threshold must be positive")
    parts = hard_risk_exact(t, mu, r)
    f = lambda y: abs(y) ** r * phi(y - mu)
    pts = [0.0] if -t < 0 < t else None
    inner = _quad(f, -t, t, points=pts)
    # inside |y| < t: (c_r - E) - inner + D; outside: 2E
    return float(abs_moment(r) + parts.E + parts.D - inner)


def _summarize(losses: np.ndarray, r: float, tag: str, seed: int) -> RiskReport:
    R = losses.size
    return RiskReport(
        mean_loss=float(np.mean(losses)),
        std_error=float(np.std(losses, ddof=1) / np.sqrt(R)),
        replicates=R,
        loss_exponent=r,
        estimator=tag,
        seed=seed,
    )


def _run(loss_of, replicates: int, workers: int) -> np.ndarray:
    if replicates < 2:
        raise DomainError("need at least 2 replicates")
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return np.fromiter(pool.map(loss_of, range(replicates)), float, replicates)
    return np.fromiter(map(loss_of, range(replicates)), float, replicates)


def mc_risk(config: Configuration, b: FdrBoundary, method: str = STEP_UP, r: float = 2.0,
            replicates: int = 100, seed: int = 0, workers: int = 1) -> RiskReport:
    """Monte Carlo l_r risk of a data-driven thresholding rule."""
    mu = config.values
    sigma = b.noise_scale

    def loss_of(i):
        y = mu + sigma * replicate_normals(seed, i, mu.size)
        mu_hat = estimate(y, b, method, r).mu_hat
        return np.sum(np.abs(mu_hat - mu) ** r)

    return _summarize(_run(loss_of, replicates, workers), r, method, seed)


def mc_risk_fixed(config: Configuration, t: float, r: float = 2.0, replicates: int = 100,
                  seed: int = 0, workers: int = 1) -> RiskReport:
    """Monte Carlo l_r risk of hard thresholding at a fixed t (unit noise)."""
    mu = config.values

    def loss_of(i):
        y = mu + replicate_normals(seed, i, mu.size)
        return np.sum(np.abs(hard_threshold(y, t) - mu) ** r)

    return _summarize(_run(loss_of, replicates, workers), r, "fixed", seed)
