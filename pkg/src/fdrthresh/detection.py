"""Mean exceedance counts, the mean discovery number and related detection bounds.

Everything here works in noise-scale units: means are divided by the
boundary's noise scale and compared to standardized thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .balls import L0, ParameterBall, membership, optimal_fixed_threshold
from .boundary import FdrBoundary
from .errors import DataError, DomainError
from .gauss import cdf, upper_tail


@dataclass(frozen=True)
class DetectionConstants:
    b1: float
    b2: float
    b3: float
    b4: float
    q_prime: float
    q_doubleprime: float


@dataclass(frozen=True)
class DetectionConstantsNote:
    """Constants that only appear in asymptotic lower bounds; carried, not used."""

    b5: float | None = None
    gamma: float | None = None


@dataclass(frozen=True)
class DiscoveryBounds:
    k_mean: float
    k_minus: float
    k_plus: float
    alpha_n: float
    k_n: float
    kappa_n: float
    tau_eta: float
    constants: DetectionConstants


def _means(b: FdrBoundary, mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size != b.n:
        raise DataError(f"expected a vector of length {b.n}")
    return mu / b.noise_scale


def exceedance_probability(t, mu):
    """P(|mu + z| >= t)."""
    return upper_tail(t - mu) + cdf(-t - mu)


def exceedance_mean(b: FdrBoundary, mu, k: float) -> float:
    """Expected number of |y_i| at or above t_k."""
    t = b.standardized(k)
    return float(np.sum(exceedance_probability(t, _means(b, mu))))


def exceedance_mean_derivative(b: FdrBoundary, mu, k: float) -> float:
    """d/dk of exceedance_mean, (q/n) sum exp(-mu^2/2) cosh(t_k mu)."""
    t = b.standardized(k)
    m = np.abs(_means(b, mu))
    # exp(-m^2/2) cosh(t m) written to avoid overflow of cosh
    terms = 0.5 * (np.exp(t * m - 0.5 * m * m) + np.exp(-t * m - 0.5 * m * m))
    return float(b.q / b.n * np.sum(terms))


def mean_discovery_number(b: FdrBoundary, mu, k_floor: float = 1e-12) -> float:
    """Smallest k in (0, n] with exceedance_mean(k) = k, or 0 if there is none.

    M(k)/k decreases in k, so bracket the crossing on a halving grid from
    k = n downward and solve inside the bracket.
    """
    m = _means(b, mu)
    if not np.any(m):
        return 0.0
    f = lambda k: exceedance_mean(b, m * b.noise_scale, k) - k
    hi = float(b.n)
    if f(hi) >= 0:
        return hi
    lo = hi / 2
    while f(lo) < 0:
        hi, lo = lo, lo / 2
        if lo < k_floor:
            return 0.0
    return float(optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500))


def assumption_constants(q: float, n: int, log_inverse_radius: float) -> DetectionConstants:
    """Constants b1..b4, q', q'' for a boundary at rate q.

    b1 = q log n is the largest constant consistent with q >= b1 / log n at
    this n; b2 = 1 and b3 = log(1/eta) / log n place eta on the upper edge of
    its admissible range. Neither enters the numerics.
    """
    return DetectionConstants(
        b1=float(q * np.log(n)),
        b2=1.0,
        b3=float(log_inverse_radius / np.log(n)),
        b4=(1 - q) / 4,
        q_prime=(q + 1) / 2,
        q_doubleprime=(1 - q) / 2,
    )


def alpha_n(b4: float, tau: float) -> float:
    return 1.0 / (b4 * tau)


def discovery_bounds(b: FdrBoundary, ball: ParameterBall, mu, c0: float = 1.0) -> DiscoveryBounds:
    """Deterministic window [k_minus, k_plus] expected to contain both FDR indices."""
    if not membership(ball, mu):
        raise DomainError("mu is not a member of the ball")
    tau = optimal_fixed_threshold(ball)
    consts = assumption_constants(b.q, b.n, ball.log_inverse_radius)
    a = alpha_n(consts.b4, tau)
    k_n = ball.sparsity_index
    k = mean_discovery_number(b, mu)
    k_minus = k - a * k_n if k >= 2 * a * k_n else 0.0
    k_plus = max(k, a * k_n) + a * k_n
    if ball.kind == L0:
        kappa = (a + 1 / (1 - b.q)) * k_n
    else:
        d_n = 2 * c0 / tau
        kappa = (a + 1 / (1 - b.q - d_n)) * k_n
    return DiscoveryBounds(k, k_minus, k_plus, a, k_n, kappa, tau, consts)


def threshold_window(b: FdrBoundary, bounds: DiscoveryBounds) -> tuple[float, float]:
    """(t_-, t_+) = (t at k_plus, t at k_minus); k_minus = 0 maps to +inf."""
    t_minus = float(b.threshold_at(min(bounds.k_plus, b.n)))
    t_plus = float(b.threshold_at(bounds.k_minus)) if bounds.k_minus > 0 else np.inf
    return t_minus, t_plus


def bi_threshold(b: FdrBoundary, nu: float, k: float, pi: float) -> float:
    """Exceedance probability at t_nu of the mean whose exceedance probability at t_k is pi."""
    if not nu < k:
        raise DomainError("need nu < k")
    t_nu, t_k = b.standardized(nu), b.standardized(k)
    p0 = b.q * k / b.n
    if pi < p0 * (1 - 1e-12) or pi > 1:
        raise DomainError(f"pi must lie in [q k / n, 1] = [{p0}, 1]")
    if pi >= 1 - 1e-14:
        return 1.0
    if pi <= p0:
        return float(b.q * nu / b.n)
    g = lambda m: exceedance_probability(t_k, m) - pi
    hi = t_k + 1.0
    while g(hi) < 0:
        hi *= 2
    m = optimize.brentq(g, 0.0, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    return float(exceedance_probability(t_nu, m))


def true_positive_rate(b: FdrBoundary, ball: ParameterBall, mu, nu: float) -> float:
    """Average detection probability at t_nu over the floor(k'_n) largest means.

    k'_n = n eta for l0 and n eta^p tau^p for lp balls.
    """
    m = _means(b, mu)
    if ball.kind == L0:
        k_prime = ball.n * ball.eta
    else:
        tau = optimal_fixed_threshold(ball)
        k_prime = ball.n * ball.eta ** ball.p * tau ** ball.p
    top = int(np.floor(k_prime + 1e-9))
    if top < 1:
        raise DomainError("k'_n < 1")
    top = min(top, b.n)
    largest = -np.sort(-np.abs(m))[:top]
    return float(np.mean(exceedance_probability(b.standardized(nu), largest)))


def delta_p(epsilon: float, p: float) -> float:
    """p eps times the integral of w^{p-2} over [eps, 1], in closed form."""
    if not 0 < epsilon < 1 or not 0 < p <= 2:
        raise DomainError("need 0 < epsilon < 1 and 0 < p <= 2")
    if p == 1:
        return float(epsilon * np.log(1 / epsilon))
    return float(p * epsilon * (1 - epsilon ** (p - 1)) / (p - 1))


def bennett_tail(M: float, k: float) -> float:
    """exp(-M h(k/M) / 4) with h(x) = min(|x-1|, (x-1)^2)."""
    if not M > 0 or k < 0:
        raise DomainError("need M > 0 and k >= 0")
    if k == M:
        raise DomainError("bound is degenerate at k = M")
    x = abs(k / M - 1)
    return float(np.exp(-0.25 * M * min(x, x * x)))
