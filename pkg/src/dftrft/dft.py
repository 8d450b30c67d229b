"""Discriminant feature test: per-feature minimum weighted split entropy.

For each candidate threshold the samples are split into ``x < t`` and
``x >= t``; the loss is the size-weighted mean of the two subsets' class
entropies (in bits).  A feature's score is the lowest loss over all candidates.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .binning import BinHistogram, BinningConfig, build_histogram, lowest_argmin
from .data import DataValidationError, FeatureMatrix, Target, check_paired
from .scores import DftScore


def subset_entropy(class_counts: Sequence[float] | NDArray) -> float:
    """Shannon entropy in bits of the class distribution given by counts.

    Empty classes contribute nothing; an empty subset has entropy 0.
    """
    c = np.asarray(class_counts, dtype=np.float64)
    if np.any(c < 0):
        raise ValueError("class counts must be non-negative")
    return float(_entropy(c[:, None])[0])


def _entropy(counts: NDArray[np.float64]) -> NDArray[np.float64]:
    # counts: (C, K) -> entropy of each of the K columns
    total = counts.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / total
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    # Summing in sorted order makes the result independent of class labelling.
    terms = np.sort(terms, axis=0)
    return np.where(total > 0, 0.0 - terms.sum(axis=0), 0.0)


def _class_weights(hist: BinHistogram) -> NDArray[np.float64]:
    per_class = hist.class_counts.sum(axis=1).astype(np.float64)
    n_classes = per_class.shape[0]
    return per_class.sum() / (n_classes * per_class)


def dft_losses(hist: BinHistogram, class_balanced: bool = False) -> NDArray[np.float64]:
    """Weighted split entropy at every boundary b = 1..B-1.

    With ``class_balanced`` each class's counts are rescaled so all classes
    carry equal total weight before entropies and subset sizes are formed.
    """
    if not hist.is_categorical:
        raise TypeError("dft requires a categorical histogram")
    totals = hist.class_counts.sum(axis=1).astype(np.float64)
    left = hist.left_class_counts().astype(np.float64)
    right = totals[:, None] - left
    if class_balanced:
        w = _class_weights(hist)[:, None]
        left, right, totals = left * w, right * w, totals * w[:, 0]
    n_left = left.sum(axis=0)
    n_right = right.sum(axis=0)
    return (n_left * _entropy(left) + n_right * _entropy(right)) / totals.sum()


def dft_loss_at(histogram: BinHistogram, boundary: int, class_balanced: bool = False) -> float:
    """Loss of the split at bin boundary ``b`` (threshold ``thresholds[b - 1]``)."""
    if not histogram.is_categorical:
        raise TypeError("dft requires a categorical histogram")
    if not 1 <= boundary <= histogram.n_bins - 1:
        raise ValueError(f"boundary must be in [1, {histogram.n_bins - 1}], got {boundary}")
    return float(dft_losses(histogram, class_balanced)[boundary - 1])


def dft_score(
    feature_column: NDArray[np.float64] | Sequence[float],
    target: Target,
    config: BinningConfig = BinningConfig(),
    *,
    class_balanced: bool = False,
    feature_index: int = 0,
) -> DftScore:
    """Minimum weighted split entropy of one feature.

    Ties go to the smallest threshold.  A constant feature has no candidates;
    it is flagged degenerate and scored ``log2(C)`` so it ranks last.
    """
    if not target.is_categorical:
        raise DataValidationError("dft requires categorical target")
    hist = build_histogram(feature_column, target, config)
    ceiling = math.log2(target.n_classes)
    cand = hist.candidates
    if hist.degenerate:
        return DftScore(feature_index, ceiling, cand.feature_min,
                        cand.thresholds, np.empty(0), degenerate=True)
    losses = dft_losses(hist, class_balanced)
    best = lowest_argmin(losses, ceiling)
    return DftScore(feature_index, float(losses.min()), float(cand.thresholds[best]),
                    cand.thresholds, losses)


def dft_score_all(
    matrix: FeatureMatrix,
    target: Target,
    config: BinningConfig = BinningConfig(),
    *,
    class_balanced: bool = False,
    workers: int | None = None,
) -> list[DftScore]:
    """Score every column; the result is ordered by feature index."""
    check_paired(matrix, target)

    def one(i: int) -> DftScore:
        return dft_score(matrix.column(i), target, config,
                         class_balanced=class_balanced, feature_index=i)

    idx = range(matrix.n_features)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, idx))
    return [one(i) for i in idx]
