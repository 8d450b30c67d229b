"""Candidate thresholds and per-feature bin histograms.

A feature range ``[lo, hi]`` is cut into ``B`` equal segments, giving the
``B - 1`` interior candidate thresholds ``lo + (b / B) * (hi - lo)``.  A sample
goes to the left subset of threshold ``t`` iff ``x < t``, where a sample within
``GRID_TOL * (hi - lo)`` of ``t`` counts as lying on it and so goes right.  The
band makes membership of on-grid samples (integer-valued features, say)
independent of how an affine rescaling of the feature happens to round.

Each sample is assigned to one of ``B`` bins so that the samples in bins
``0 .. b-1`` are exactly the left subset of threshold ``b``.  Cumulative sums
over bins then yield the left/right statistics of every threshold in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .data import DataValidationError, Target

DEFAULT_BINS = 16
GRID_TOL = 1e-9


@dataclass(frozen=True)
class BinningConfig:
    n_bins: int = DEFAULT_BINS

    def __post_init__(self) -> None:
        if int(self.n_bins) != self.n_bins or self.n_bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.n_bins}")


@dataclass(frozen=True, eq=False)
class CandidateThresholds:
    thresholds: NDArray[np.float64]
    feature_min: float
    feature_max: float

    def __len__(self) -> int:
        return self.thresholds.shape[0]


def candidate_thresholds(
    feature_min: float, feature_max: float, config: BinningConfig
) -> CandidateThresholds:
    """The ``B - 1`` uniformly spaced thresholds; empty for a zero-width range."""
    if not (np.isfinite(feature_min) and np.isfinite(feature_max)) or feature_min > feature_max:
        raise ValueError(f"invalid feature range [{feature_min}, {feature_max}]")
    lo, hi = float(feature_min), float(feature_max)
    if lo == hi:
        t = np.empty(0, dtype=np.float64)
    else:
        b = np.arange(1, config.n_bins, dtype=np.float64)
        # b / B is exact for B a power of two, so thresholds for B are a
        # bitwise subset of those for 2B.
        t = lo + (b / config.n_bins) * (hi - lo)
    return CandidateThresholds(t, lo, hi)


def bin_indices(column: NDArray[np.float64], cand: CandidateThresholds, n_bins: int) -> NDArray[np.intp]:
    """Bin of each sample: the number of candidate thresholds it does not fall left of.

    This is the clamped ``floor(B * (x - lo) / (hi - lo))`` rule, evaluated
    against the materialized thresholds so that bin membership agrees exactly
    with the left/right rule above.  A constant feature puts every sample in
    the top bin.
    """
    if len(cand) == 0:
        return np.full(column.shape[0], n_bins - 1, dtype=np.intp)
    band = GRID_TOL * (cand.feature_max - cand.feature_min)
    return np.searchsorted(cand.thresholds - band, column, side="right").astype(np.intp)


@dataclass(frozen=True, eq=False)
class BinHistogram:
    """Per-bin sufficient statistics for one feature.

    Categorical: ``class_counts`` has shape (C, B).  Continuous: ``count``,
    ``sum`` and ``sumsq`` each have shape (B,).
    """

    kind: str
    candidates: CandidateThresholds
    n_bins: int
    class_counts: NDArray[np.int64] | None = None
    count: NDArray[np.int64] | None = None
    sum: NDArray[np.float64] | None = None
    sumsq: NDArray[np.float64] | None = None

    @property
    def is_categorical(self) -> bool:
        return self.class_counts is not None

    @property
    def degenerate(self) -> bool:
        return len(self.candidates) == 0

    @property
    def n_samples(self) -> int:
        if self.is_categorical:
            return int(self.class_counts.sum())
        return int(self.count.sum())

    def bin_counts(self) -> NDArray[np.int64]:
        return self.class_counts.sum(axis=0) if self.is_categorical else self.count

    # prefix[:, b] holds the statistics of bins 0..b-1, i.e. of the left
    # subset of threshold b; columns 1..B-1 are the candidate thresholds.
    def left_class_counts(self) -> NDArray[np.int64]:
        """(C, B-1) left-subset class counts for thresholds b = 1..B-1."""
        return np.cumsum(self.class_counts, axis=1)[:, :-1]

    def left_moments(self) -> tuple[NDArray, NDArray, NDArray]:
        """Left-subset (count, sum, sumsq), each of length B-1."""
        return (
            np.cumsum(self.count)[:-1],
            np.cumsum(self.sum)[:-1],
            np.cumsum(self.sumsq)[:-1],
        )


def build_histogram(
    feature_column: NDArray[np.float64] | list, target: Target, config: BinningConfig
) -> BinHistogram:
    x = np.asarray(feature_column, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != len(target):
        raise DataValidationError(
            f"feature column has {x.shape[0] if x.ndim == 1 else x.shape} values, target has {len(target)}"
        )
    if x.shape[0] < 2:
        raise DataValidationError("need at least 2 samples")
    B = config.n_bins
    cand = candidate_thresholds(x.min(), x.max(), config)
    bins = bin_indices(x, cand, B)
    if target.is_categorical:
        counts = np.zeros((target.n_classes, B), dtype=np.int64)
        np.add.at(counts, (target.labels, bins), 1)
        return BinHistogram(target.kind, cand, B, class_counts=counts)
    y = target.values
    return BinHistogram(
        target.kind, cand, B,
        count=np.bincount(bins, minlength=B).astype(np.int64),
        sum=np.bincount(bins, weights=y, minlength=B),
        sumsq=np.bincount(bins, weights=y * y, minlength=B),
    )


def lowest_argmin(losses: NDArray[np.float64], scale: float) -> int:
    """Index of the minimum loss, preferring the earliest near-tie.

    Losses within ``1e-12 * scale`` (plus the same relative slack) of the
    minimum count as tied; the smallest index among them wins.  Exact ties
    arise whenever a bin is empty, and mathematically equal losses computed
    along different summation orders can differ in the last bit.
    """
    m = float(losses.min())
    tol = 1e-12 * (abs(m) + scale)
    return int(np.flatnonzero(losses <= m + tol)[0])
