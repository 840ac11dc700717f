"""Datasets, CSV ingestion and random train/test splits."""

import csv
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._rng import as_generator

#: A target is auto-detected as categorical only with at most this many levels.
CLASS_CAP = 10


class DataError(ValueError):
    """Raised for malformed input data."""


@dataclass(frozen=True)
class Task:
    kind: str
    n_classes: int | None = None

    def __post_init__(self):
        if self.kind not in ("regression", "classification"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.kind == "classification":
            if self.n_classes is None or self.n_classes < 2:
                raise ValueError("classification needs n_classes >= 2")
        elif self.n_classes is not None:
            raise ValueError("regression takes no n_classes")

    @classmethod
    def regression(cls):
        return cls("regression")

    @classmethod
    def classification(cls, n_classes):
        return cls("classification", int(n_classes))

    @property
    def is_classification(self):
        return self.kind == "classification"

    def __str__(self):
        if self.is_classification:
            return f"classification(K={self.n_classes})"
        return "regression"


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable n x p design with its response.

    Classification responses are stored as integer labels ``1..K``;
    ``class_labels[k - 1]`` holds the original value behind label ``k``.
    """

    features: np.ndarray
    response: np.ndarray
    feature_names: tuple
    task: Task
    class_labels: tuple | None = field(default=None)

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        y = np.array(self.response, copy=True)
        if X.ndim != 2:
            raise DataError("features must be a 2-d array")
        n, p = X.shape
        if n < 1 or p < 1:
            raise DataError("dataset must have at least one row and one feature")
        if y.shape != (n,):
            raise DataError(f"response has shape {y.shape}, expected ({n},)")
        names = tuple(str(s) for s in self.feature_names)
        if len(names) != p:
            raise DataError(f"{len(names)} feature names for {p} columns")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain missing or non-finite values")
        if self.task.is_classification:
            if not np.all(np.equal(np.mod(y, 1), 0)):
                raise DataError("classification labels must be integers")
            y = y.astype(np.int64)
            if y.min() < 1 or y.max() > self.task.n_classes:
                raise DataError(f"labels must lie in 1..{self.task.n_classes}")
        else:
            y = y.astype(np.float64)
            if not np.all(np.isfinite(y)):
                raise DataError("response contains missing or non-finite values")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def p(self):
        return self.features.shape[1]

    def subset_rows(self, rows):
        rows = np.asarray(rows)
        return Dataset(self.features[rows], self.response[rows], self.feature_names,
                       self.task, self.class_labels)

    def subset_columns(self, cols):
        cols = list(cols)
        return Dataset(self.features[:, cols], self.response,
                       [self.feature_names[c] for c in cols], self.task, self.class_labels)

    def fingerprint(self):
        """SHA-256 over shape, names, task and raw values."""
        h = hashlib.sha256()
        h.update(f"{self.n}x{self.p}|{self.task}|".encode())
        h.update("\x1f".join(self.feature_names).encode())
        h.update(np.ascontiguousarray(self.features).tobytes())
        h.update(np.ascontiguousarray(self.response).tobytes())
        return h.hexdigest()


def _infer_task(values):
    if np.all(np.equal(np.mod(values, 1), 0)):
        levels = np.unique(values)
        if 2 <= len(levels) <= CLASS_CAP:
            return Task.classification(len(levels))
    return Task.regression()


def encode_labels(values):
    """Map observed labels to ``1..K`` in sorted order; return (codes, levels)."""
    levels, codes = np.unique(values, return_inverse=True)
    return codes.reshape(-1) + 1, levels


def load_csv(path, target, task_hint=None):
    """Read a headed, comma-separated numeric CSV into a :class:`Dataset`.

    The task is inferred unless ``task_hint`` is given: an integer-valued
    target with at most ``CLASS_CAP`` distinct levels is treated as
    classification, anything else as regression.  ``task_hint`` may be a
    :class:`Task` or the strings ``"regression"`` / ``"classification"``
    (the latter taking K from the observed levels).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if target not in header:
        raise DataError(f"{path}: target column {target!r} not in header")
    t = header.index(target)
    body = [r for r in rows[1:] if any(c.strip() for c in r)]
    if not body:
        raise DataError(f"{path}: no data rows")

    values = np.empty((len(body), len(header)), dtype=np.float64)
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i + 2} has {len(row)} cells, expected {len(header)}")
        for k, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: non-numeric value {cell!r} at row {i + 2}, "
                                f"column {header[k]!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: missing value at row {i + 2}, column {header[k]!r}")
            values[i, k] = v

    feature_cols = [k for k in range(len(header)) if k != t]
    if not feature_cols:
        raise DataError(f"{path}: no feature columns besides the target")
    X = values[:, feature_cols]
    y = values[:, t]
    if task_hint is None:
        task = _infer_task(y)
    elif task_hint == "regression":
        task = Task.regression()
    elif task_hint == "classification":
        if not np.all(np.equal(np.mod(y, 1), 0)):
            raise DataError(f"{path}: classification target {target!r} has non-integer values")
        task = Task.classification(max(2, len(np.unique(y))))
    else:
        task = task_hint
    labels = None
    if task.is_classification:
        codes, levels = encode_labels(y)
        if len(levels) > task.n_classes:
            raise DataError(f"{path}: {len(levels)} classes observed, task allows {task.n_classes}")
        y = codes
        labels = tuple(float(v) for v in levels)
    return Dataset(X, y, [header[k] for k in feature_cols], task, labels)


def _fmt(v):
    return repr(float(v))


def write_csv(dataset, path, target="y"):
    """Write features then the response column; values round-trip exactly."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(dataset.feature_names) + [target])
        y = dataset.response
        if dataset.class_labels is not None:
            y = np.asarray(dataset.class_labels)[y - 1]
        for row, yi in zip(dataset.features, y):
            w.writerow([_fmt(v) for v in row] + [_fmt(yi)])


def split_indices(n, test_fraction, seed):
    """Return sorted (train, test) row indices for a random partition of ``n`` rows.

    The test part holds ``round(n * test_fraction)`` rows (halves round up).
    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError("test_fraction must lie in (0, 1)")
    n_test = int(math.floor(n * test_fraction + 0.5))
    if n_test < 1 or n_test > n - 1:
        raise DataError(f"test_fraction={test_fraction} leaves an empty partition for n={n}")
    perm = as_generator(seed).permutation(n)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def split(dataset, test_fraction, seed):
    """Randomly partition the rows of ``dataset`` into (train, test)."""
    train_idx, test_idx = split_indices(dataset.n, test_fraction, seed)
    return dataset.subset_rows(train_idx), dataset.subset_rows(test_idx)
