"""Paired Monte Carlo comparisons of FDR thresholding against tuned fixed thresholds."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .balls import Configuration, sim_least_favorable, tstar
from .boundary import FdrBoundary
from .errors import DomainError
from .estimators import step_down_index, step_up_index
from .rng import replicate_normals

FDR_ESTIMATORS = ("step_up", "penalized", "step_down")
ESTIMATORS = FDR_ESTIMATORS + ("foster_george", "fixed_tstar")
CONFIG_KINDS = ("sim_least_favorable", "null", "file")
TASKS = ("table1", "foster_george", "mc_risk")


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    p: float = 1.5
    q_list: tuple[float, ...] = (0.01, 0.05, 0.25, 0.40, 0.50, 0.75, 0.99)
    estimators: tuple[str, ...] = FDR_ESTIMATORS
    replicates: int = 100
    seed: int = 0
    loss_exponent: float = 2.0
    config_kind: str = "sim_least_favorable"
    config_path: str | None = None
    negative_exponent: bool = False
    task: str = "table1"

    def __post_init__(self):
        object.__setattr__(self, "q_list", tuple(float(q) for q in self.q_list))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.n < 2:
            raise DomainError("n must be at least 2")
        if self.replicates < 2:
            raise DomainError("replicates must be at least 2")
        if not self.q_list or any(not 0 < q < 1 for q in self.q_list):
            raise DomainError("q_list entries must lie in (0, 1)")
        if not 0 < self.p < 2:
            raise DomainError("p must lie in (0, 2)")
        if not 0 < self.loss_exponent <= 2:
            raise DomainError("loss_exponent must lie in (0, 2]")
        bad = set(self.estimators) - set(ESTIMATORS)
        if bad:
            raise DomainError(f"unknown estimators {sorted(bad)}")
        if self.config_kind not in CONFIG_KINDS:
            raise DomainError(f"config_kind must be one of {CONFIG_KINDS}")
        if self.config_kind == "file" and not self.config_path:
            raise DomainError("config_kind 'file' needs config_path")
        if self.task not in TASKS:
            raise DomainError(f"task must be one of {TASKS}")

    def configuration(self) -> Configuration:
        if self.config_kind == "sim_least_favorable":
            return sim_least_favorable(self.n, self.p, self.negative_exponent)
        if self.config_kind == "null":
            return Configuration(np.zeros(self.n), "null")
        from .io import read_vector

        values = read_vector(self.config_path)
        if values.size != self.n:
            raise DomainError(f"configuration file has {values.size} entries, expected {self.n}")
        return Configuration(values, "user_file")


@dataclass(frozen=True)
class RatioEstimate:
    """MSE of an estimator relative to a reference on common replicates.

    ``ratio`` is the ratio of mean losses; ``mean_of_ratios`` and ``se`` come
    from the per-replicate paired ratios. MSEs are per coordinate.
    """

    ratio: float
    se: float
    mean_of_ratios: float
    mse: float
    mse_se: float
    mse_reference: float
    mse_reference_se: float


@dataclass(frozen=True)
class Table1Row:
    n: int
    q: float
    ratio_step_up: float
    ratio_penalized: float
    ratio_step_down: float
    se_step_up: float
    se_penalized: float
    se_step_down: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _ratio(losses: np.ndarray, reference: np.ndarray, n: int) -> RatioEstimate:
    R = losses.size
    per_rep = losses / reference
    sem = lambda x: float(np.std(x, ddof=1) / np.sqrt(R))
    return RatioEstimate(
        ratio=float(losses.mean() / reference.mean()),
        se=sem(per_rep),
        mean_of_ratios=float(per_rep.mean()),
        mse=float(losses.mean() / n),
        mse_se=sem(losses / n),
        mse_reference=float(reference.mean() / n),
        mse_reference_se=sem(reference / n),
    )


def replicate_losses(mu: np.ndarray, q_list, replicates: int, seed: int, r: float = 2.0,
                     fixed_threshold: float | None = None) -> dict:
    """Per-replicate l_r losses of each rule on y = mu + z (unit noise).

    Every rule keeps the k largest |y_i| for some k, so one sort per replicate
    and a cumulative loss table give all the losses at once. Returns arrays
    keyed by ("step_up", q), ("penalized", q), ("step_down", q),
    "foster_george" and "fixed".
    """
    n = mu.size
    bounds = [FdrBoundary(n, q) for q in q_list]
    cum_pens = [b.cumulative_penalty(r) for b in bounds]
    fg_pen = np.concatenate(([0.0], np.cumsum(2.0 * np.log(n / np.arange(1, n + 1)))))
    base = np.sum(np.abs(mu) ** r)
    out = {key: np.empty(replicates) for key in ("foster_george", "fixed")}
    for q in q_list:
        for name in FDR_ESTIMATORS:
            out[(name, q)] = np.empty(replicates)
    for i in range(replicates):
        y = mu + replicate_normals(seed, i, n)
        order = np.argsort(-np.abs(y), kind="stable")
        a = np.abs(y[order])
        m = mu[order]
        gain = np.abs(y[order] - m) ** r - np.abs(m) ** r
        keep_loss = base + np.concatenate(([0.0], np.cumsum(gain)))
        tail_r = np.concatenate((np.cumsum((a ** r)[::-1])[::-1], [0.0]))
        for q, b, pen in zip(q_list, bounds, cum_pens):
            t = b.thresholds
            out[("step_up", q)][i] = keep_loss[step_up_index(a, t)]
            out[("step_down", q)][i] = keep_loss[step_down_index(a, t)]
            out[("penalized", q)][i] = keep_loss[int(np.argmin(tail_r + pen))]
        rss = np.concatenate((np.cumsum((a * a)[::-1])[::-1], [0.0]))
        out["foster_george"][i] = keep_loss[int(np.argmin(rss + fg_pen))]
        if fixed_threshold is not None:
            out["fixed"][i] = keep_loss[int(np.count_nonzero(a >= fixed_threshold))]
    return out


def run_table1(spec: ExperimentSpec) -> list[Table1Row]:
    """MSE ratios of the three FDR rules to hard thresholding at tstar(p, n)."""
    mu = spec.configuration().values
    n = mu.size
    losses = replicate_losses(mu, spec.q_list, spec.replicates, spec.seed,
                              spec.loss_exponent, tstar(spec.p, n))
    ref = losses["fixed"]
    rows = []
    for q in spec.q_list:
        est = {name: _ratio(losses[(name, q)], ref, n) for name in FDR_ESTIMATORS}
        rows.append(Table1Row(
            n=n, q=q,
            ratio_step_up=est["step_up"].ratio,
            ratio_penalized=est["penalized"].ratio,
            ratio_step_down=est["step_down"].ratio,
            se_step_up=est["step_up"].se,
            se_penalized=est["penalized"].se,
            se_step_down=est["step_down"].se,
            details={name: asdict(e) for name, e in est.items()},
        ))
    return rows


def run_foster_george(n: int, p: float = 1.5, replicates: int = 100, seed: int = 0,
                      negative_exponent: bool = False) -> RatioEstimate:
    """MSE of the sum-of-2log(n/j) penalized rule relative to tstar(p, n)."""
    if replicates < 2:
        raise DomainError("replicates must be at least 2")
    mu = sim_least_favorable(n, p, negative_exponent).values
    losses = replicate_losses(mu, (), replicates, seed, 2.0, tstar(p, n))
    return _ratio(losses["foster_george"], losses["fixed"], n)
