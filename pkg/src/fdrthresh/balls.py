"""Sparsity balls, concrete mean configurations and minimax benchmarks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import FdrBoundary
from .errors import DataError, DomainError
from .estimators import penalized_objective

L0 = "l0"
STRONG = "strong_lp"
WEAK = "weak_lp"
KINDS = (L0, STRONG, WEAK)


@dataclass(frozen=True)
class ParameterBall:
    """A sparsity class in R^n.

    ``l0``: at most eta*n nonzeros. ``strong_lp``: mean of |mu_i|^p at most
    eta^p. ``weak_lp``: k-th largest magnitude at most eta n^{1/p} k^{-1/p}.
    """

    kind: str
    eta: float
    n: int
    p: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}")
        if not 0 < self.eta < 1:
            raise DomainError("eta must lie in (0, 1)")
        if self.kind != L0 and not (self.p is not None and 0 < self.p <= 2):
            raise DomainError("lp balls need 0 < p <= 2")

    @property
    def log_inverse_radius(self) -> float:
        """log(1/eta) for l0, log(eta^-p) for lp balls."""
        if self.kind == L0:
            return float(-np.log(self.eta))
        return float(-self.p * np.log(self.eta))

    @property
    def sparsity_index(self) -> float:
        """k_n: n*eta for l0, n eta^p tau^-p for lp balls (real valued)."""
        if self.kind == L0:
            return self.n * self.eta
        tau = optimal_fixed_threshold(self)
        return self.n * self.eta ** self.p * tau ** (-self.p)


@dataclass(frozen=True)
class Configuration:
    """A mean vector with a provenance label (and the ball it was built for)."""

    values: np.ndarray
    label: str
    alpha: float | None = None
    ball: ParameterBall | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if self.ball is not None and not membership(self.ball, v):
            raise DomainError(f"{self.label} configuration is not in its ball")

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ComplexityResult:
    value: float
    k_opt: int
    mu0: np.ndarray


def _check_length(ball: ParameterBall, mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size != ball.n:
        raise DataError(f"expected a vector of length {ball.n}")
    return mu


def membership(ball: ParameterBall, mu, rtol: float = 1e-12) -> bool:
    """Exact indicator of the ball constraint, up to rounding in the bound."""
    mu = _check_length(ball, mu)
    a = np.abs(mu)
    if ball.kind == L0:
        return bool(np.count_nonzero(a) <= ball.eta * ball.n * (1 + rtol))
    if ball.kind == STRONG:
        return bool(np.mean(a ** ball.p) <= ball.eta ** ball.p * (1 + rtol))
    k = np.arange(1, ball.n + 1)
    bound = ball.eta * ball.n ** (1 / ball.p) * k ** (-1 / ball.p)
    return bool(np.all(-np.sort(-a) <= bound * (1 + rtol)))


def extremal_sequence(ball: ParameterBall) -> Configuration:
    """The least sparse member of a weak lp ball: eta n^{1/p} k^{-1/p}."""
    if ball.kind != WEAK:
        raise DomainError("extremal sequence is defined for weak_lp balls")
    k = np.arange(1, ball.n + 1)
    values = ball.eta * ball.n ** (1 / ball.p) * k ** (-1 / ball.p)
    return Configuration(values, "extremal", ball=ball)


def two_point_config(b: FdrBoundary, ball: ParameterBall, alpha: float) -> Configuration:
    """floor(eta n) entries at t[k_n] + alpha, zeros elsewhere."""
    if ball.kind != L0:
        raise DomainError("two-point configuration needs an l0 ball")
    k_n = int(np.floor(ball.eta * ball.n + 1e-9))
    if k_n < 1:
        raise DomainError("eta * n < 1 leaves no room for nonzero entries")
    level = float(b.thresholds[k_n - 1]) + alpha
    if not level > 0:
        raise DomainError("t[k_n] + alpha must be positive")
    values = np.zeros(ball.n)
    values[:k_n] = level
    return Configuration(values, "two_point", alpha=alpha, ball=ball)


def winsorized_config(b: FdrBoundary, ball: ParameterBall, alpha: float) -> Configuration:
    """Extremal sequence capped at t[k_n] + alpha with k_n = n eta^p tau^-p."""
    if ball.kind != WEAK:
        raise DomainError("Winsorized configuration needs a weak_lp ball")
    k_n = ball.sparsity_index
    cap = float(b.threshold_at(k_n)) + alpha
    values = np.minimum(extremal_sequence(ball).values, cap)
    if not cap > 0:
        raise DomainError("t[k_n] + alpha must be positive")
    return Configuration(values, "winsorized", alpha=alpha, ball=ball)


def tstar(p: float, n: int) -> float:
    """Fixed threshold sqrt((2 - p) log n), tuned to the power-law sparsity class."""
    return float(np.sqrt((2.0 - p) * np.log(n)))


def sim_least_favorable(n: int, p: float, negative_exponent: bool = False) -> Configuration:
    """min(n^{1/2} k^{-1/p}, tstar(p, n)) for k = 1..n.

    ``negative_exponent`` swaps n^{1/2} for n^{-1/2}, a variant kept only for
    comparison (it yields a signal far below the noise level).
    """
    if not 0 < p < 2:
        raise DomainError("p must lie in (0, 2)")
    k = np.arange(1, n + 1)
    scale = n ** (-0.5 if negative_exponent else 0.5)
    values = np.minimum(scale * k ** (-1.0 / p), tstar(p, n))
    return Configuration(values, "sim_least_favorable")


def optimal_fixed_threshold(ball: ParameterBall) -> float:
    """tau = sqrt(2 log eta^-1) (l0) or sqrt(2 log eta^-p) (lp)."""
    L = ball.log_inverse_radius
    if L < 0.5:
        raise DomainError("radius too large: need 2 log(1/eta) >= 1 (eta^p for lp)")
    return float(np.sqrt(2.0 * L))


def minimax_risk(ball: ParameterBall, r: float = 2.0) -> float:
    """Leading-order minimax l_r risk over the ball."""
    if not 0 < r <= 2:
        raise DomainError("r must lie in (0, 2]")
    L2 = 2.0 * ball.log_inverse_radius
    if ball.kind == L0:
        return float(ball.n * ball.eta * L2 ** (r / 2))
    if ball.p >= r:
        raise DomainError("lp minimax risk needs p < r")
    strong = ball.n * ball.eta ** ball.p * L2 ** ((r - ball.p) / 2)
    return float(strong if ball.kind == STRONG else r / (r - ball.p) * strong)


def theoretical_complexity(b: FdrBoundary, mu, r: float = 2.0) -> ComplexityResult:
    """min over k of sum_{l>k} |mu|_(l)^r + sum_{l<=k} t_l^r, ties to smallest k."""
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size != b.n:
        raise DataError(f"expected a vector of length {b.n}")
    a = -np.sort(-np.abs(mu))
    s = penalized_objective(a, b.cumulative_penalty(r), r)
    k = int(np.argmin(s))
    if k == 0:
        mu0 = np.zeros_like(mu)
    else:
        mu0 = np.where(np.abs(mu) >= b.thresholds[k - 1], mu, 0.0)
    return ComplexityResult(float(s[k]), k, mu0)
