"""FDR-controlled thresholding for sparse Gaussian means."""

from .boundary import FdrBoundary, foster_george_penalty, two_k_log_nk_penalty
from .errors import DataError, DomainError
from .estimators import (
    SelectionResult,
    ThresholdEstimate,
    bonferroni_threshold,
    empirical_fdr,
    estimate,
    hard_threshold,
    select_penalized,
    select_step_down,
    select_step_up,
    soft_threshold,
    universal_threshold,
)

__all__ = [
    "DataError",
    "DomainError",
    "FdrBoundary",
    "SelectionResult",
    "ThresholdEstimate",
    "bonferroni_threshold",
    "empirical_fdr",
    "estimate",
    "foster_george_penalty",
    "hard_threshold",
    "select_penalized",
    "select_step_down",
    "select_step_up",
    "soft_threshold",
    "two_k_log_nk_penalty",
    "universal_threshold",
]
