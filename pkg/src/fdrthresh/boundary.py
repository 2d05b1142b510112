"""The rank-indexed FDR threshold sequence and related penalties."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .gauss import phi, quantile


@dataclass(frozen=True)
class FdrBoundary:
    """Thresholds t_k = noise_scale * z(q k / 2n) for ranks k in (0, n].

    Integer-rank thresholds are computed once at construction; real ranks
    are evaluated on demand.
    """

    n: int
    q: float
    noise_scale: float = 1.0
    thresholds: np.ndarray = field(init=False, repr=False, compare=False)
    _sums: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie in (0, 1), got {self.q}")
        if not self.noise_scale > 0:
            raise DomainError("noise_scale must be positive")
        object.__setattr__(self, "n", int(self.n))
        ranks = np.arange(1, self.n + 1)
        t = self.noise_scale * quantile(self.q * ranks / (2.0 * self.n))
        t = np.atleast_1d(t)
        t.setflags(write=False)
        object.__setattr__(self, "thresholds", t)

    def _check_rank(self, k):
        k = np.asarray(k, dtype=float)
        if np.any(~((k > 0) & (k <= self.n))):
            raise DomainError(f"rank must lie in (0, {self.n}]")
        return k

    def threshold_at(self, k):
        """t_k for real k in (0, n]."""
        k = self._check_rank(k)
        return self.noise_scale * quantile(self.q * k / (2.0 * self.n))

    def standardized(self, k):
        """z(q k / 2n), i.e. the threshold in noise-scale units."""
        k = self._check_rank(k)
        return quantile(self.q * k / (2.0 * self.n))

    def threshold_derivative(self, k):
        """d t_k / dk, which is negative."""
        z = self.standardized(k)
        return -self.noise_scale * self.q / (2.0 * self.n * phi(z))

    def cumulative_penalty(self, r: float = 2.0) -> np.ndarray:
        """Array c with c[k] = sum_{l<=k} t_l^r for k = 0..n."""
        if not r > 0:
            raise DomainError("exponent r must be positive")
        key = float(r)
        if key not in self._sums:
            c = np.concatenate(([0.0], np.cumsum(self.thresholds ** key)))
            c.setflags(write=False)
            self._sums[key] = c
        return self._sums[key]

    def penalty_sum(self, k: int, r: float = 2.0) -> float:
        if not 0 <= k <= self.n:
            raise DomainError(f"k must lie in [0, {self.n}]")
        return float(self.cumulative_penalty(r)[int(k)])

    def lambda_kn(self, k: int) -> float:
        """Average squared standardized threshold over the first k ranks, halved."""
        if not 1 <= k <= self.n:
            raise DomainError(f"k must lie in [1, {self.n}]")
        z = self.thresholds[: int(k)] / self.noise_scale
        return float(np.sum(z * z) / (2.0 * k))


def foster_george_penalty(n: int, k: int) -> float:
    """sum_{j<=k} 2 log(n / j)."""
    if not 0 <= k <= n:
        raise DomainError("need 0 <= k <= n")
    j = np.arange(1, int(k) + 1)
    return float(np.sum(2.0 * np.log(n / j)))


def two_k_log_nk_penalty(n: int, k: int) -> float:
    """2 k log(n / k), taken as 0 at k = 0."""
    if not 0 <= k <= n:
        raise DomainError("need 0 <= k <= n")
    if k == 0:
        return 0.0
    return float(2.0 * k * np.log(n / k))
