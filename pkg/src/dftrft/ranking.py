"""Feature ranking, elbow detection on the ranked curve and top-k selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.typing import NDArray

LOSS_ASCENDING = "loss-ascending"
SCORE_DESCENDING = "score-descending"
POLARITIES = (LOSS_ASCENDING, SCORE_DESCENDING)

# Second differences at or below this (on the [0, 1]-normalized curve) are
# treated as no bend at all.
_FLAT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RankedFeatures:
    """Features ordered most important first.

    ``sorted_values[r]`` is the value of feature ``order[r]``.
    """

    order: NDArray[np.intp]
    sorted_values: NDArray[np.float64]
    polarity: str
    method: str = ""

    def __len__(self) -> int:
        return self.order.shape[0]


@dataclass(frozen=True, eq=False)
class ElbowReport:
    """Early and late cut-offs as 1-based ranks (= number of features kept).

    ``curvature_profile[j]`` is the second difference of the normalized curve
    at rank ``j + 2``, i.e. over the interior ranks 2..P-1.
    """

    early_index: int
    late_index: int
    curvature_profile: NDArray[np.float64]
    degenerate: bool = False
    note: str = ""


class Selection(NamedTuple):
    ordered: list[int]
    members: frozenset[int]


def rank(
    scores: Sequence[float] | NDArray, polarity: str = LOSS_ASCENDING, method: str = ""
) -> RankedFeatures:
    """Stable sort of per-feature values; equal values keep index order."""
    if polarity not in POLARITIES:
        raise ValueError(f"polarity must be one of {POLARITIES}")
    v = np.asarray(scores, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need at least one score")
    if np.any(np.isnan(v)):
        raise ValueError("scores must not be NaN")
    if polarity == LOSS_ASCENDING:
        if not np.all(np.isfinite(v)):
            raise ValueError("losses must be finite")
        order = np.argsort(v, kind="stable")
    else:
        if np.any(v == -np.inf):
            raise ValueError("scores must be finite or +inf")
        order = np.argsort(-v, kind="stable")
    return RankedFeatures(order, v[order], polarity, method)


def _moving_average(v: NDArray[np.float64], window: int) -> NDArray[np.float64]:
    half = window // 2
    padded = np.pad(v, (half, window - 1 - half), mode="edge")
    return np.convolve(padded, np.ones(window) / window, mode="valid")


def normalized_curve(ranked: RankedFeatures) -> NDArray[np.float64] | None:
    """Ranked values mapped to an ascending curve on [0, 1]; None if flat.

    Score curves are negated first.  An infinite score is clipped to the
    largest finite score before normalization.
    """
    v = ranked.sorted_values.astype(np.float64)
    if ranked.polarity == SCORE_DESCENDING:
        finite = v[np.isfinite(v)]
        cap = finite.max() if finite.size else 0.0
        v = -np.where(np.isfinite(v), v, cap)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return None
    return (v - lo) / (hi - lo)


def detect_elbow(ranked: RankedFeatures, smooth_window: int | None = None) -> ElbowReport:
    """Locate the sharpest bend of the ranked curve.

    The late cut-off is the interior rank with the largest second difference
    (earliest on ties).  The early cut-off is the first interior rank whose
    second difference reaches half of that maximum.  A curve with no positive
    bend yields ``early = late = P`` and ``degenerate=True``.
    """
    p = len(ranked)
    if p < 3:
        raise ValueError(f"elbow detection needs at least 3 features, got {p}")
    curve = normalized_curve(ranked)
    if curve is None:
        return ElbowReport(p, p, np.zeros(p - 2), degenerate=True, note="constant curve")
    if smooth_window and smooth_window > 1:
        curve = _moving_average(curve, smooth_window)
    d2 = curve[2:] - 2.0 * curve[1:-1] + curve[:-2]
    peak = float(d2.max())
    if peak <= _FLAT_TOL:
        return ElbowReport(p, p, d2, degenerate=True, note="no bend")
    late = int(np.argmax(d2)) + 2
    early = int(np.flatnonzero(d2 >= 0.5 * peak)[0]) + 2
    return ElbowReport(early, late, d2)


def select_top_k(ranked: RankedFeatures, k: int) -> Selection:
    p = len(ranked)
    if not 1 <= k <= p:
        raise ValueError(f"k must be in [1, {p}], got {k}")
    ordered = [int(i) for i in ranked.order[:k]]
    return Selection(ordered, frozenset(ordered))
