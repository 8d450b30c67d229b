"""Relevant feature test: per-feature minimum weighted split MSE.

Each side of a split predicts its samples by the side's target mean; the loss
is the size-weighted mean of the two sides' mean squared errors, which equals
the total squared error divided by N.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .binning import BinHistogram, BinningConfig, build_histogram, lowest_argmin
from .data import DataValidationError, FeatureMatrix, Target, check_paired
from .scores import RftScore


def side_mse(count: int, sum: float, sumsq: float) -> float:
    """MSE of predicting a subset by its mean, from its sufficient statistics."""
    return float(_side_mse(np.asarray([count], dtype=np.float64),
                           np.asarray([sum]), np.asarray([sumsq]))[0])


def _side_mse(n: NDArray, s: NDArray, ss: NDArray) -> NDArray[np.float64]:
    with np.errstate(divide="ignore", invalid="ignore"):
        mean = s / n
        mse = ss / n - mean * mean
    return np.where(n > 1, np.maximum(mse, 0.0), 0.0)


def rft_losses(hist: BinHistogram) -> NDArray[np.float64]:
    """Weighted split MSE at every boundary b = 1..B-1."""
    if hist.is_categorical:
        raise TypeError("rft requires a continuous histogram")
    n_l, s_l, ss_l = hist.left_moments()
    n = float(hist.count.sum())
    n_r = n - n_l
    s_r = hist.sum.sum() - s_l
    ss_r = hist.sumsq.sum() - ss_l
    n_l = n_l.astype(np.float64)
    return (n_l * _side_mse(n_l, s_l, ss_l) + n_r * _side_mse(n_r, s_r, ss_r)) / n


def rft_loss_at(histogram: BinHistogram, boundary: int) -> float:
    if histogram.is_categorical:
        raise TypeError("rft requires a continuous histogram")
    if not 1 <= boundary <= histogram.n_bins - 1:
        raise ValueError(f"boundary must be in [1, {histogram.n_bins - 1}], got {boundary}")
    return float(rft_losses(histogram)[boundary - 1])


def rft_score(
    feature_column: NDArray[np.float64] | Sequence[float],
    target: Target,
    config: BinningConfig = BinningConfig(),
    *,
    feature_index: int = 0,
) -> RftScore:
    """Minimum weighted split MSE of one feature.

    Ties go to the smallest threshold.  A constant feature is flagged
    degenerate and scored with the no-split MSE, the population variance of y.
    """
    if target.is_categorical:
        raise DataValidationError("rft requires continuous target")
    y = target.values
    # Centering keeps the sum-of-squares identity well conditioned and makes
    # losses insensitive to a shift of y.
    centered = Target.continuous(y - y.mean())
    hist = build_histogram(feature_column, centered, config)
    total_var = float(np.var(centered.values))
    cand = hist.candidates
    if hist.degenerate:
        return RftScore(feature_index, total_var, cand.feature_min,
                        cand.thresholds, np.empty(0), degenerate=True)
    losses = rft_losses(hist)
    best = lowest_argmin(losses, total_var)
    return RftScore(feature_index, float(losses.min()), float(cand.thresholds[best]),
                    cand.thresholds, losses)


def rft_score_all(
    matrix: FeatureMatrix,
    target: Target,
    config: BinningConfig = BinningConfig(),
    *,
    workers: int | None = None,
) -> list[RftScore]:
    """Score every column; the result is ordered by feature index."""
    check_paired(matrix, target)

    def one(i: int) -> RftScore:
        return rft_score(matrix.column(i), target, config, feature_index=i)

    idx = range(matrix.n_features)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, idx))
    return [one(i) for i in idx]
