"""Uniform front end over all scorers, used by the CLI and the benchmark."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import baselines
from .binning import BinningConfig
from .data import CATEGORICAL, CONTINUOUS, DataValidationError, FeatureMatrix, Target
from .dft import dft_score_all
from .ranking import LOSS_ASCENDING, SCORE_DESCENDING, RankedFeatures, rank
from .rft import rft_score_all

# method -> (required target kind or None for either, polarity)
METHODS: dict[str, tuple[str | None, str]] = {
    "dft": (CATEGORICAL, LOSS_ASCENDING),
    "rft": (CONTINUOUS, LOSS_ASCENDING),
    "anova": (CATEGORICAL, SCORE_DESCENDING),
    "corr": (None, SCORE_DESCENDING),
    "var": (None, SCORE_DESCENDING),
}


@dataclass(frozen=True, eq=False)
class MethodResult:
    method: str
    polarity: str
    values: NDArray[np.float64]
    thresholds: NDArray[np.float64] | None
    degenerate: NDArray[np.bool_]
    records: list

    def ranked(self) -> RankedFeatures:
        return rank(self.values, self.polarity, self.method)


def check_compatible(method: str, target_kind: str) -> None:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}")
    need = METHODS[method][0]
    if need is not None and need != target_kind:
        raise DataValidationError(f"{method} requires {need} target")


def score_features(
    method: str,
    matrix: FeatureMatrix,
    target: Target,
    config: BinningConfig = BinningConfig(),
    *,
    class_balanced: bool = False,
    workers: int | None = None,
) -> MethodResult:
    check_compatible(method, target.kind)
    polarity = METHODS[method][1]
    thresholds = None
    if method == "dft":
        recs = dft_score_all(matrix, target, config, class_balanced=class_balanced, workers=workers)
    elif method == "rft":
        recs = rft_score_all(matrix, target, config, workers=workers)
    elif method == "anova":
        recs = baselines.anova_f_all(matrix, target)
    elif method == "corr":
        recs = baselines.abs_corr_all(matrix, target)
    else:
        recs = baselines.variance_all(matrix)
    if method in ("dft", "rft"):
        values = np.array([r.optimal_loss for r in recs])
        thresholds = np.array([r.optimal_threshold for r in recs])
    else:
        values = np.array([r.score for r in recs])
    degenerate = np.array([r.degenerate for r in recs], dtype=bool)
    return MethodResult(method, polarity, values, thresholds, degenerate, recs)
