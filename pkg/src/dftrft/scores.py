"""Result record shared by the threshold-search tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class FeatureScore:
    """Optimized split loss of one feature.

    Attributes:
        feature_index: column position in the scored matrix.
        optimal_loss: minimum of ``losses`` (lower is better).
        optimal_threshold: the candidate achieving it; ``feature_min`` when
            the feature is constant.
        thresholds: candidate thresholds, ascending.
        losses: loss at each candidate.
        degenerate: True for a constant feature (no candidates).
    """

    feature_index: int
    optimal_loss: float
    optimal_threshold: float
    thresholds: NDArray[np.float64]
    losses: NDArray[np.float64]
    degenerate: bool = False

    @property
    def loss_curve(self) -> list[tuple[float, float]]:
        return list(zip(self.thresholds.tolist(), self.losses.tolist()))


class DftScore(FeatureScore):
    """Weighted-entropy score (bits) of a feature against class labels."""


class RftScore(FeatureScore):
    """Weighted mean-predictor MSE of a feature against a continuous target."""
