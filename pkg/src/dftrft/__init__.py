"""Supervised feature selection by histogram threshold search.

``dft`` scores features for classification by their best weighted split
entropy, ``rft`` scores them for regression by their best weighted split MSE.
Lower is better for both.  ``baselines`` provides ANOVA F, |r| and variance.
"""

from .baselines import BaselineScore, abs_corr, anova_f, variance_score
from .binning import BinHistogram, BinningConfig, build_histogram, candidate_thresholds
from .data import (
    DataValidationError,
    DatasetSummary,
    FeatureMatrix,
    Target,
    add_gaussian_noise,
    load_csv,
    summarize,
)
from .dft import dft_loss_at, dft_score, dft_score_all, subset_entropy
from .methods import MethodResult, score_features
from .ranking import ElbowReport, RankedFeatures, detect_elbow, rank, select_top_k
from .rft import rft_loss_at, rft_score, rft_score_all, side_mse
from .scores import DftScore, FeatureScore, RftScore

__version__ = "0.1.0"

__all__ = [
    "BaselineScore", "BinHistogram", "BinningConfig", "DataValidationError",
    "DatasetSummary", "DftScore", "ElbowReport", "FeatureMatrix", "FeatureScore",
    "MethodResult", "RankedFeatures", "RftScore", "Target", "abs_corr",
    "add_gaussian_noise", "anova_f", "build_histogram", "candidate_thresholds",
    "detect_elbow", "dft_loss_at", "dft_score", "dft_score_all", "load_csv", "rank",
    "rft_loss_at", "rft_score", "rft_score_all", "score_features", "select_top_k",
    "side_mse", "subset_entropy", "summarize", "variance_score",
]
