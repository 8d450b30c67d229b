"""Selector comparison at the early/late elbow of the primary test's curve.

For a classification task the primary test is ``dft`` and the downstream
metric is nearest-centroid accuracy; for regression they are ``rft`` and OLS
test MSE.  Cut-offs come from the primary curve on the training split and are
shared by every method, so all methods are compared at the same dimension.
The noisy condition adds Gaussian noise to both splits and repeats everything,
including the elbow detection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .binning import BinningConfig
from .data import add_gaussian_noise
from .evaluation import (
    Dataset,
    SyntheticSpec,
    generate_classification,
    generate_regression,
    least_squares_eval,
    nearest_centroid_eval,
)
from .methods import score_features
from .ranking import detect_elbow, select_top_k

CLASSIFICATION = "classification"
REGRESSION = "regression"

TASK_METHODS = {
    CLASSIFICATION: ("dft", "anova", "corr", "var"),
    REGRESSION: ("rft", "corr", "var"),
}

# Offset between the seeds of the training and test draws of a synthetic task.
TEST_SEED_OFFSET = 1_000_003


@dataclass
class ConditionResult:
    k_early: int
    k_late: int
    full: float
    early: dict[str, float] = field(default_factory=dict)
    late: dict[str, float] = field(default_factory=dict)
    top_sets: dict[str, list[int]] = field(default_factory=dict)


@dataclass
class BenchReport:
    task: str
    metric: str
    methods: tuple[str, ...]
    n_bins: int
    noise_sigma: float
    seed: int
    clean: ConditionResult
    noisy: ConditionResult
    informative: list[int] | None = None

    def rows(self) -> list[dict[str, Any]]:
        """One row per method, columns laid out early/late/full x clean/noisy."""
        out = []
        for m in self.methods:
            row: dict[str, Any] = {"method": m}
            for name, cond in (("clean", self.clean), ("noisy", self.noisy)):
                row[f"early_{name}"] = cond.early[m]
                row[f"late_{name}"] = cond.late[m]
                row[f"full_{name}"] = cond.full
            if self.informative is not None:
                want = set(self.informative)
                row["recovers_informative_clean"] = set(self.clean.top_sets[m]) == want
                row["recovers_informative_noisy"] = set(self.noisy.top_sets[m]) == want
            out.append(row)
        return out

    def to_dict(self) -> dict[str, Any]:
        def cond(c: ConditionResult) -> dict[str, Any]:
            return {"k_early": c.k_early, "k_late": c.k_late, "full": c.full,
                    "early": c.early, "late": c.late, "top_sets": c.top_sets}
        return {
            "task": self.task, "metric": self.metric, "methods": list(self.methods),
            "bins": self.n_bins, "noise_sigma": self.noise_sigma, "seed": self.seed,
            "informative": self.informative,
            "clean": cond(self.clean), "noisy": cond(self.noisy), "rows": self.rows(),
        }


def _evaluate(task: str, train: Dataset, test: Dataset, selected) -> float:
    if task == CLASSIFICATION:
        return nearest_centroid_eval(train, test, selected).value
    return least_squares_eval(train, test, selected).value


def _condition(task, train, test, methods, config, n_top) -> ConditionResult:
    results = {m: score_features(m, *train, config) for m in methods}
    elbow = detect_elbow(results[methods[0]].ranked())
    p = train[0].n_features
    cond = ConditionResult(elbow.early_index, elbow.late_index,
                           _evaluate(task, train, test, range(p)))
    for m, res in results.items():
        ranked = res.ranked()
        cond.early[m] = _evaluate(task, train, test, select_top_k(ranked, elbow.early_index).ordered)
        cond.late[m] = _evaluate(task, train, test, select_top_k(ranked, elbow.late_index).ordered)
        cond.top_sets[m] = sorted(select_top_k(ranked, n_top).ordered)
    return cond


def run_benchmark(
    task: str,
    train: Dataset,
    test: Dataset,
    *,
    config: BinningConfig = BinningConfig(),
    noise_sigma: float = 0.0,
    seed: int = 0,
    informative: list[int] | None = None,
    methods: tuple[str, ...] | None = None,
) -> BenchReport:
    if task not in TASK_METHODS:
        raise ValueError(f"task must be one of {sorted(TASK_METHODS)}")
    methods = tuple(methods or TASK_METHODS[task])
    n_top = len(informative) if informative else min(5, train[0].n_features)
    clean = _condition(task, train, test, methods, config, n_top)
    noisy_train = (add_gaussian_noise(train[0], noise_sigma, seed), train[1])
    noisy_test = (add_gaussian_noise(test[0], noise_sigma, seed + 1), test[1])
    noisy = _condition(task, noisy_train, noisy_test, methods, config, n_top)
    metric = "accuracy" if task == CLASSIFICATION else "mse"
    return BenchReport(task, metric, methods, config.n_bins, noise_sigma, seed,
                       clean, noisy, sorted(informative) if informative else None)


def synthetic_split(task: str, spec: SyntheticSpec) -> tuple[Dataset, Dataset]:
    """Independent train and test draws of the same synthetic problem."""
    gen = generate_classification if task == CLASSIFICATION else generate_regression
    test_spec = SyntheticSpec(**{**spec.__dict__, "seed": spec.seed + TEST_SEED_OFFSET})
    return gen(spec), gen(test_spec)


def run_synthetic_benchmark(
    task: str, spec: SyntheticSpec, *, config: BinningConfig = BinningConfig(),
    noise_sigma: float = 0.0,
) -> BenchReport:
    train, test = synthetic_split(task, spec)
    return run_benchmark(task, train, test, config=config, noise_sigma=noise_sigma,
                         seed=spec.seed, informative=sorted(spec.informative))
