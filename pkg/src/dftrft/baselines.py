"""Classic filter scores: one-way ANOVA F, |Pearson r| and variance.

All three are higher-is-better.  A feature whose classes are each constant but
differ between classes gets ``F = inf``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .data import DataValidationError, FeatureMatrix, Target, check_paired

ANOVA_F = "anova_f"
ABS_CORR = "abs_corr"
VARIANCE = "variance"

INF_SENTINEL = float("inf")


@dataclass(frozen=True)
class BaselineScore:
    feature_index: int
    method: str
    score: float
    degenerate: bool = False


def anova_f(
    feature_column: Sequence[float] | NDArray, target: Target, feature_index: int = 0
) -> BaselineScore:
    """One-way ANOVA F statistic of the feature grouped by class.

    ``F = (SS_between / (C - 1)) / (SS_within / (N - C))``.
    """
    if not target.is_categorical:
        raise DataValidationError("anova requires categorical target")
    x = np.asarray(feature_column, dtype=np.float64)
    n, c = x.shape[0], target.n_classes
    if n != len(target):
        raise DataValidationError("feature and target lengths differ")
    if n <= c:
        raise DataValidationError(f"anova needs more samples than classes (N={n}, C={c})")
    lab = target.labels
    if x.max() == x.min():
        return BaselineScore(feature_index, ANOVA_F, 0.0, degenerate=True)
    n_c = np.bincount(lab, minlength=c).astype(np.float64)
    mu_c = np.bincount(lab, weights=x, minlength=c) / n_c
    ss_between = float(np.sum(n_c * (mu_c - x.mean()) ** 2))
    # Zero within-class spread is decided exactly, not from rounded sums.
    lo = np.full(c, np.inf)
    hi = np.full(c, -np.inf)
    np.minimum.at(lo, lab, x)
    np.maximum.at(hi, lab, x)
    if np.all(lo == hi):
        return BaselineScore(feature_index, ANOVA_F, INF_SENTINEL)
    ss_within = float(np.sum((x - mu_c[lab]) ** 2))
    f = (ss_between / (c - 1)) / (ss_within / (n - c))
    return BaselineScore(feature_index, ANOVA_F, f)


def abs_corr(
    feature_column: Sequence[float] | NDArray,
    target_values: Sequence[float] | NDArray,
    feature_index: int = 0,
) -> BaselineScore:
    """Absolute Pearson correlation; 0 (degenerate) if either side is constant."""
    x = np.asarray(feature_column, dtype=np.float64)
    y = np.asarray(target_values, dtype=np.float64)
    if x.shape != y.shape:
        raise DataValidationError("feature and target lengths differ")
    if x.shape[0] < 2:
        raise DataValidationError("need at least 2 samples")
    if x.max() == x.min() or y.max() == y.min():
        return BaselineScore(feature_index, ABS_CORR, 0.0, degenerate=True)
    xc = x - x.mean()
    yc = y - y.mean()
    r = np.dot(xc, yc) / np.sqrt(np.dot(xc, xc) * np.dot(yc, yc))
    return BaselineScore(feature_index, ABS_CORR, float(min(abs(r), 1.0)))


def variance_score(feature_column: Sequence[float] | NDArray, feature_index: int = 0) -> BaselineScore:
    """Unbiased sample variance; ignores the target."""
    x = np.asarray(feature_column, dtype=np.float64)
    if x.shape[0] < 2:
        raise DataValidationError("need at least 2 samples")
    if x.max() == x.min():
        return BaselineScore(feature_index, VARIANCE, 0.0, degenerate=True)
    return BaselineScore(feature_index, VARIANCE, float(np.var(x, ddof=1)))


def anova_f_all(matrix: FeatureMatrix, target: Target) -> list[BaselineScore]:
    check_paired(matrix, target)
    return [anova_f(matrix.column(i), target, i) for i in range(matrix.n_features)]


def abs_corr_all(matrix: FeatureMatrix, target: Target) -> list[BaselineScore]:
    """|r| against the target; categorical ids are used as reals."""
    check_paired(matrix, target)
    y = target.as_float()
    return [abs_corr(matrix.column(i), y, i) for i in range(matrix.n_features)]


def variance_all(matrix: FeatureMatrix, target: Target | None = None) -> list[BaselineScore]:
    return [variance_score(matrix.column(i), i) for i in range(matrix.n_features)]
