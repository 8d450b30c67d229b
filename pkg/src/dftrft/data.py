"""Dataset containers, CSV ingestion and validation.

A :class:`FeatureMatrix` holds an N x P table of float64 values stored
column-major so per-feature scans are contiguous.  A :class:`Target` is either
categorical (dense class ids) or continuous.  Both are immutable once built.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray


class DataValidationError(ValueError):
    """Raised when input data violates a container invariant."""


CATEGORICAL = "categorical"
CONTINUOUS = "continuous"
TARGET_KINDS = (CATEGORICAL, CONTINUOUS)


def _frozen(a: NDArray) -> NDArray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Validated N x P sample-by-feature table.

    Attributes:
        values: float64 array of shape (N, P), Fortran-ordered, read-only.
        names: one name per column.
    """

    values: NDArray[np.float64]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64, order="F", copy=True)
        if v.ndim != 2:
            raise DataValidationError(f"feature matrix must be 2-D, got {v.ndim}-D")
        n, p = v.shape
        if n < 2:
            raise DataValidationError(f"need at least 2 samples, got {n}")
        if p < 1:
            raise DataValidationError("need at least 1 feature")
        bad = np.argwhere(~np.isfinite(v))
        if bad.size:
            r, c = bad[0]
            raise DataValidationError(f"non-finite value at ({r},{c})")
        names = tuple(self.names) if self.names else tuple(f"f{i}" for i in range(p))
        if len(names) != p:
            raise DataValidationError(f"{len(names)} names for {p} features")
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "names", names)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column(self, i: int) -> NDArray[np.float64]:
        """Feature ``i`` as N values in row order."""
        return self.values[:, i]

    def subset(self, indices: Sequence[int]) -> FeatureMatrix:
        idx = list(indices)
        return FeatureMatrix(self.values[:, idx], tuple(self.names[i] for i in idx))

    def take_rows(self, rows: NDArray[np.intp]) -> FeatureMatrix:
        return FeatureMatrix(self.values[rows], self.names)


@dataclass(frozen=True, eq=False)
class Target:
    """Per-sample target, categorical or continuous.

    Build instances with :meth:`categorical` or :meth:`continuous`.  For
    categorical targets ``labels`` holds dense ids in ``[0, n_classes)`` and
    ``class_names[c]`` is the original label text of id ``c``.
    """

    kind: str
    labels: NDArray[np.int64] | None = None
    values: NDArray[np.float64] | None = None
    n_classes: int = 0
    class_names: tuple[str, ...] = field(default=())

    @classmethod
    def categorical(
        cls, labels: Sequence[int] | NDArray, n_classes: int | None = None,
        class_names: Sequence[str] = (),
    ) -> Target:
        lab = np.asarray(labels)
        if lab.ndim != 1:
            raise DataValidationError("labels must be 1-D")
        if lab.size and not np.issubdtype(lab.dtype, np.integer):
            if not np.all(np.equal(np.mod(lab, 1), 0)):
                raise DataValidationError("categorical labels must be integer ids")
        lab = lab.astype(np.int64)
        c = int(n_classes) if n_classes is not None else (int(lab.max()) + 1 if lab.size else 0)
        if c < 2:
            raise DataValidationError(f"categorical target needs at least 2 classes, got {c}")
        if lab.size and (lab.min() < 0 or lab.max() >= c):
            raise DataValidationError(f"class ids must lie in [0, {c})")
        counts = np.bincount(lab, minlength=c)
        if np.any(counts == 0):
            missing = int(np.flatnonzero(counts == 0)[0])
            raise DataValidationError(f"class {missing} has no samples")
        names = tuple(class_names) if class_names else tuple(str(i) for i in range(c))
        return cls(CATEGORICAL, labels=_frozen(lab.copy()), n_classes=c, class_names=names)

    @classmethod
    def continuous(cls, values: Sequence[float] | NDArray) -> Target:
        y = np.array(values, dtype=np.float64, copy=True)
        if y.ndim != 1:
            raise DataValidationError("target values must be 1-D")
        bad = np.flatnonzero(~np.isfinite(y))
        if bad.size:
            raise DataValidationError(f"non-finite target value at row {bad[0]}")
        return cls(CONTINUOUS, values=_frozen(y))

    @property
    def is_categorical(self) -> bool:
        return self.kind == CATEGORICAL

    def __len__(self) -> int:
        arr = self.labels if self.is_categorical else self.values
        return 0 if arr is None else arr.shape[0]

    def as_float(self) -> NDArray[np.float64]:
        """Target as reals; categorical ids are cast directly."""
        if self.is_categorical:
            return self.labels.astype(np.float64)
        return self.values

    def take_rows(self, rows: NDArray[np.intp]) -> Target:
        if self.is_categorical:
            return Target.categorical(self.labels[rows], self.n_classes, self.class_names)
        return Target.continuous(self.values[rows])


def check_paired(matrix: FeatureMatrix, target: Target) -> None:
    if len(target) != matrix.n_samples:
        raise DataValidationError(
            f"target has {len(target)} samples, feature matrix has {matrix.n_samples}"
        )


@dataclass(frozen=True, eq=False)
class DatasetSummary:
    minimum: NDArray[np.float64]
    maximum: NDArray[np.float64]
    mean: NDArray[np.float64]
    variance: NDArray[np.float64]
    class_counts: dict[int, int] | None = None


def summarize(matrix: FeatureMatrix, target: Target) -> DatasetSummary:
    """Per-feature range, mean and unbiased variance; class counts if categorical."""
    check_paired(matrix, target)
    v = matrix.values
    counts = None
    if target.is_categorical:
        counts = {c: int(k) for c, k in enumerate(np.bincount(target.labels, minlength=target.n_classes))}
    return DatasetSummary(
        minimum=v.min(axis=0),
        maximum=v.max(axis=0),
        mean=v.mean(axis=0),
        variance=v.var(axis=0, ddof=1),
        class_counts=counts,
    )


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; the one PRNG used throughout the package."""
    return np.random.Generator(np.random.PCG64(seed))


def add_gaussian_noise(matrix: FeatureMatrix, sigma: float, seed: int) -> FeatureMatrix:
    """Return a copy of ``matrix`` with i.i.d. N(0, sigma^2) noise added entrywise."""
    if not sigma >= 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return FeatureMatrix(matrix.values, matrix.names)
    noise = make_rng(seed).standard_normal(matrix.values.shape)
    return FeatureMatrix(matrix.values + sigma * noise, matrix.names)


# -- CSV ---------------------------------------------------------------------


@dataclass(frozen=True)
class CsvTable:
    """Raw text cells of a delimited file, header separated from data rows."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    delimiter: str = ","

    def column_index(self, label_column: str | int) -> int:
        if isinstance(label_column, int) or (isinstance(label_column, str) and label_column.lstrip("-").isdigit()
                                             and label_column not in self.header):
            idx = int(label_column)
            if idx < 0:
                idx += len(self.header)
            if not 0 <= idx < len(self.header):
                raise DataValidationError(f"label column index {label_column} out of range")
            return idx
        try:
            return self.header.index(label_column)
        except ValueError:
            raise DataValidationError(f"label column {label_column!r} not found") from None


def read_csv_table(path: str | os.PathLike, delimiter: str = ",") -> CsvTable:
    if not os.path.isfile(path):
        raise DataValidationError(f"file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise DataValidationError(f"{path}: empty file") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataValidationError(
                    f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}"
                )
            rows.append(tuple(row))
    return CsvTable(header, tuple(rows), delimiter)


def _parse_float(cell: str, row: int, col: int) -> float:
    try:
        x = float(cell)
    except ValueError:
        raise DataValidationError(f"non-numeric value {cell!r} at ({row},{col})") from None
    if not np.isfinite(x):
        raise DataValidationError(f"non-finite value at ({row},{col})")
    return x


def table_to_dataset(
    table: CsvTable, label_column: str | int, target_kind: str
) -> tuple[FeatureMatrix, Target]:
    """Convert raw cells into a validated (matrix, target) pair.

    Row and column numbers in error messages are 0-based positions among data
    rows and file columns.  Categorical labels get dense ids in order of first
    appearance; the original texts are kept in ``Target.class_names``.
    """
    if target_kind not in TARGET_KINDS:
        raise ValueError(f"target_kind must be one of {TARGET_KINDS}")
    li = table.column_index(label_column)
    feat_cols = [j for j in range(len(table.header)) if j != li]
    if not feat_cols:
        raise DataValidationError("no feature columns")
    if len(table.rows) < 2:
        raise DataValidationError(f"need at least 2 samples, got {len(table.rows)}")
    values = np.empty((len(table.rows), len(feat_cols)), dtype=np.float64, order="F")
    for r, row in enumerate(table.rows):
        for k, j in enumerate(feat_cols):
            values[r, k] = _parse_float(row[j], r, j)
    matrix = FeatureMatrix(values, tuple(table.header[j] for j in feat_cols))

    raw = [row[li] for row in table.rows]
    if target_kind == CATEGORICAL:
        ids: dict[str, int] = {}
        labels = [ids.setdefault(s, len(ids)) for s in raw]
        if len(ids) < 2:
            raise DataValidationError(
                f"categorical target needs at least 2 distinct labels, got {len(ids)}"
            )
        target = Target.categorical(labels, len(ids), tuple(ids))
    else:
        target = Target.continuous([_parse_float(s, r, li) for r, s in enumerate(raw)])
    return matrix, target


def load_csv(
    path: str | os.PathLike,
    label_column: str | int = -1,
    target_kind: str = CATEGORICAL,
    delimiter: str = ",",
) -> tuple[FeatureMatrix, Target]:
    """Read a headed CSV into a validated feature matrix and target.

    Every column except ``label_column`` (a header name or a position, negative
    counting from the end) is a numeric feature.
    """
    return table_to_dataset(read_csv_table(path, delimiter), label_column, target_kind)
