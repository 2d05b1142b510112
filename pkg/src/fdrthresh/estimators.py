"""Threshold selection rules and the hard-thresholding estimators they define."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import FdrBoundary
from .errors import DataError, DomainError
from .gauss import quantile

STEP_UP = "step_up"
STEP_DOWN = "step_down"
PENALIZED = "penalized"
METHODS = (STEP_UP, STEP_DOWN, PENALIZED)


@dataclass(frozen=True)
class SelectionResult:
    """Selected model size and the threshold it induces.

    ``t_hat`` is t_{k_hat}, or t_1 when nothing is selected. ``r`` is only
    set for the penalized rule.
    """

    method: str
    k_hat: int
    t_hat: float
    r: float | None = None
    objective_trace: np.ndarray | None = None


@dataclass(frozen=True)
class ThresholdEstimate:
    mu_hat: np.ndarray
    selection: SelectionResult
    discoveries: np.ndarray  # indices with |y_i| >= t_hat


def hard_threshold(y, t: float) -> np.ndarray:
    """Keep y_i when |y_i| >= t, zero it otherwise."""
    if not t > 0:
        raise DomainError("threshold must be positive")
    y = np.asarray(y, dtype=float)
    return np.where(np.abs(y) >= t, y, 0.0)


def soft_threshold(y, t: float) -> np.ndarray:
    if not t > 0:
        raise DomainError("threshold must be positive")
    y = np.asarray(y, dtype=float)
    return np.sign(y) * np.maximum(np.abs(y) - t, 0.0)


def _sorted_magnitudes(y, b: FdrBoundary) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != b.n:
        raise DataError(f"expected a vector of length {b.n}, got shape {y.shape}")
    return -np.sort(-np.abs(y))


def step_up_index(a: np.ndarray, t: np.ndarray) -> int:
    """Largest k with a[k-1] >= t[k-1], or 0; a sorted descending."""
    hits = np.flatnonzero(a >= t)
    return int(hits[-1] + 1) if hits.size else 0


def step_down_index(a: np.ndarray, t: np.ndarray) -> int:
    """One less than the first k with a[k-1] < t[k-1], or len(a) if none."""
    misses = np.flatnonzero(a < t)
    return int(misses[0]) if misses.size else a.size


def penalized_objective(a: np.ndarray, cum_pen: np.ndarray, r: float) -> np.ndarray:
    """S_k for k = 0..n: residual sum of a^r beyond rank k plus penalty up to k."""
    power = a ** r
    tail = np.concatenate((np.cumsum(power[::-1])[::-1], [0.0]))
    return tail + cum_pen


def _t_hat(b: FdrBoundary, k: int) -> float:
    return float(b.thresholds[max(k, 1) - 1])


def select_step_up(y, b: FdrBoundary) -> SelectionResult:
    k = step_up_index(_sorted_magnitudes(y, b), b.thresholds)
    return SelectionResult(STEP_UP, k, _t_hat(b, k))


def select_step_down(y, b: FdrBoundary) -> SelectionResult:
    k = step_down_index(_sorted_magnitudes(y, b), b.thresholds)
    return SelectionResult(STEP_DOWN, k, _t_hat(b, k))


def select_penalized(y, b: FdrBoundary, r: float = 2.0) -> SelectionResult:
    """Global minimizer of S_k over k in [0, n], ties to the smallest k."""
    if not 0 < r <= 2:
        raise DomainError("r must lie in (0, 2]")
    a = _sorted_magnitudes(y, b)
    s = penalized_objective(a, b.cumulative_penalty(r), r)
    k = int(np.argmin(s))
    return SelectionResult(PENALIZED, k, _t_hat(b, k), r=r, objective_trace=s)


def select(y, b: FdrBoundary, method: str = STEP_UP, r: float = 2.0) -> SelectionResult:
    if method == STEP_UP:
        return select_step_up(y, b)
    if method == STEP_DOWN:
        return select_step_down(y, b)
    if method == PENALIZED:
        return select_penalized(y, b, r)
    raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")


def estimate(y, b: FdrBoundary, method: str = STEP_UP, r: float = 2.0) -> ThresholdEstimate:
    """Hard threshold y at the data-dependent threshold of the chosen rule."""
    sel = select(y, b, method, r)
    y = np.asarray(y, dtype=float)
    if sel.k_hat == 0:
        return ThresholdEstimate(np.zeros_like(y), sel, np.array([], dtype=int))
    keep = np.abs(y) >= sel.t_hat
    return ThresholdEstimate(np.where(keep, y, 0.0), sel, np.flatnonzero(keep))


def universal_threshold(n: int, sigma: float = 1.0) -> float:
    if n < 2:
        raise DomainError("universal threshold needs n >= 2")
    return float(sigma * np.sqrt(2.0 * np.log(n)))


def bonferroni_threshold(n: int, alpha: float, sigma: float = 1.0) -> float:
    """sigma * z(alpha / 2n); alpha = 1 with n = 1 gives 0."""
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    return float(sigma * quantile(alpha / (2.0 * n)))


def empirical_fdr(est: ThresholdEstimate, truth) -> float:
    """Fraction of discoveries whose true mean is zero (0 if none)."""
    truth = np.asarray(truth, dtype=float)
    if truth.shape != est.mu_hat.shape:
        raise DataError("truth and estimate lengths differ")
    d = est.discoveries
    if d.size == 0:
        return 0.0
    return float(np.count_nonzero(truth[d] == 0) / d.size)
