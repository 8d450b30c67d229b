"""Seeded synthetic data and small downstream learners for checking selections.

All randomness comes from :func:`dftrft.data.make_rng` (PCG64), so a given
seed reproduces the same arrays on every platform numpy supports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import DataValidationError, FeatureMatrix, Target, check_paired, make_rng

ACCURACY = "accuracy"
MSE = "mse"

Dataset = tuple[FeatureMatrix, Target]


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic problem.

    Informative features occupy columns ``0 .. n_informative-1``; the noise
    features follow.  Classification uses ``n_samples_per_class`` and
    ``class_separation`` (distance between class means, in noise std units).
    Regression uses ``n_samples`` and ``target_coefficients`` (defaults to 1.0
    for each informative feature).
    """

    n_informative: int = 5
    n_noise: int = 45
    n_samples_per_class: int = 500
    n_samples: int = 1000
    class_separation: float = 6.0
    target_coefficients: tuple[float, ...] | None = None
    noise_std: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_informative < 0 or self.n_noise < 0:
            raise ValueError("feature counts must be non-negative")
        if self.n_informative + self.n_noise == 0:
            raise ValueError("need at least one informative or noise feature")

    @property
    def n_features(self) -> int:
        return self.n_informative + self.n_noise

    @property
    def informative(self) -> frozenset[int]:
        return frozenset(range(self.n_informative))

    def coefficients(self) -> np.ndarray:
        if self.target_coefficients is None:
            return np.ones(self.n_informative)
        coef = np.asarray(self.target_coefficients, dtype=np.float64)
        if coef.shape != (self.n_informative,):
            raise ValueError(f"need {self.n_informative} coefficients, got {coef.shape}")
        return coef


def generate_classification(spec: SyntheticSpec) -> Dataset:
    """Two Gaussian classes, shuffled; informative means at -sep/2 and +sep/2."""
    if spec.n_samples_per_class < 1:
        raise ValueError("n_samples_per_class must be >= 1")
    rng = make_rng(spec.seed)
    m = spec.n_samples_per_class
    labels = np.repeat([0, 1], m)
    x = rng.standard_normal((2 * m, spec.n_features))
    shift = np.where(labels == 1, 0.5, -0.5) * spec.class_separation
    x[:, : spec.n_informative] += shift[:, None]
    perm = rng.permutation(2 * m)
    return FeatureMatrix(x[perm]), Target.categorical(labels[perm], 2)


def generate_regression(spec: SyntheticSpec) -> Dataset:
    """Standard normal features; ``y = x_informative @ coef + noise_std * e``."""
    if spec.n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    rng = make_rng(spec.seed)
    x = rng.standard_normal((spec.n_samples, spec.n_features))
    y = x[:, : spec.n_informative] @ spec.coefficients()
    y = y + spec.noise_std * rng.standard_normal(spec.n_samples)
    return FeatureMatrix(x), Target.continuous(y)


def train_test_split(
    matrix: FeatureMatrix, target: Target, test_fraction: float = 0.5, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Seeded random row split."""
    check_paired(matrix, target)
    n = matrix.n_samples
    n_test = int(round(n * test_fraction))
    if not 2 <= n_test <= n - 2:
        raise ValueError(f"test_fraction {test_fraction} leaves too few rows on one side")
    perm = make_rng(seed).permutation(n)
    te, tr = np.sort(perm[:n_test]), np.sort(perm[n_test:])
    return ((matrix.take_rows(tr), target.take_rows(tr)),
            (matrix.take_rows(te), target.take_rows(te)))


@dataclass(frozen=True)
class EvalResult:
    metric: str
    value: float
    n_features_used: int
    split: str = "test"


def _selection(selected: Sequence[int] | frozenset[int], p: int) -> list[int]:
    idx = sorted(int(i) for i in selected)
    if not idx:
        raise ValueError("selection is empty")
    if idx[0] < 0 or idx[-1] >= p:
        raise ValueError(f"selected index out of range [0, {p})")
    return idx


def nearest_centroid_eval(train: Dataset, test: Dataset, selected: Sequence[int]) -> EvalResult:
    """Test accuracy of a nearest-class-mean classifier on the selected columns.

    Columns are standardized with train statistics; distances are Euclidean.
    """
    (xtr, ytr), (xte, yte) = train, test
    if not (ytr.is_categorical and yte.is_categorical):
        raise DataValidationError("nearest-centroid evaluation needs categorical targets")
    idx = _selection(selected, xtr.n_features)
    a, b = xtr.values[:, idx], xte.values[:, idx]
    mu, sd = a.mean(axis=0), a.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    a, b = (a - mu) / sd, (b - mu) / sd
    n_classes = max(ytr.n_classes, yte.n_classes)
    counts = np.bincount(ytr.labels, minlength=n_classes)
    if np.any(counts == 0):
        raise DataValidationError(f"class {int(np.flatnonzero(counts == 0)[0])} absent from train")
    centroids = np.stack([a[ytr.labels == c].mean(axis=0) for c in range(n_classes)])
    d = ((b[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    pred = np.argmin(d, axis=1)
    return EvalResult(ACCURACY, float(np.mean(pred == yte.labels)), len(idx))


def least_squares_eval(
    train: Dataset, test: Dataset, selected: Sequence[int], jitter: float = 1e-8
) -> EvalResult:
    """Test MSE of ordinary least squares with intercept on the selected columns."""
    (xtr, ytr), (xte, yte) = train, test
    if ytr.is_categorical or yte.is_categorical:
        raise DataValidationError("least-squares evaluation needs continuous targets")
    idx = _selection(selected, xtr.n_features)
    if xtr.n_samples <= len(idx) + 1:
        raise DataValidationError(
            f"need more than {len(idx) + 1} training samples for {len(idx)} features"
        )
    a = np.column_stack([np.ones(xtr.n_samples), xtr.values[:, idx]])
    gram = a.T @ a + jitter * np.eye(a.shape[1])
    try:
        beta = np.linalg.solve(gram, a.T @ ytr.values)
    except np.linalg.LinAlgError:
        raise DataValidationError("design matrix is singular") from None
    if not np.all(np.isfinite(beta)):
        raise DataValidationError("design matrix is singular")
    pred = beta[0] + xte.values[:, idx] @ beta[1:]
    return EvalResult(MSE, float(np.mean((yte.values - pred) ** 2)), len(idx))
