"""Loss functions and the average-test-error (AVTE) harness."""

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _rng
from .data import split_indices


def zero_one(y, yhat):
    """1 where the labels differ, 0 where they agree (elementwise)."""
    return np.not_equal(y, yhat).astype(np.float64)


def squared(y, yhat):
    """Elementwise squared residual ``(y - yhat) ** 2``."""
    r = np.subtract(y, yhat, dtype=np.float64)
    return r * r


class Loss(enum.Enum):
    ZERO_ONE = "zero-one"
    SQUARED = "squared"

    def __call__(self, y, yhat):
        return zero_one(y, yhat) if self is Loss.ZERO_ONE else squared(y, yhat)

    def mean(self, y, yhat):
        return float(np.mean(self(y, yhat)))

    @classmethod
    def for_task(cls, task):
        return cls.ZERO_ONE if task.is_classification else cls.SQUARED

    def check_task(self, task):
        if (self is Loss.ZERO_ONE) != task.is_classification:
            raise ValueError(f"{self.value} loss does not apply to a {task} task")


@dataclass(frozen=True)
class AvteConfig:
    R: int = 100
    test_fraction: float = 1 / 3
    seed: int = 0

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("R must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class AvteResult:
    value: float
    replicates: tuple

    def __float__(self):
        return self.value


def _replicate(dataset, trainer, config, loss, r):
    train_idx, test_idx = split_indices(
        dataset.n, config.test_fraction, _rng.substream(config.seed, _rng.SPLIT, r))
    predictor = trainer(dataset.subset_rows(train_idx))
    X_test = dataset.features[test_idx]
    y_test = dataset.response[test_idx]
    return loss.mean(y_test, predictor(X_test))


def avte(dataset, trainer, config=AvteConfig(), loss=None, n_jobs=1):
    """Average test error over ``config.R`` random train/test splits.

    ``trainer`` maps a training :class:`~perfscore.data.Dataset` to a
    callable predicting responses for a feature matrix.  Replicate ``r``
    splits with the stream keyed by ``(seed, r)``, so results do not depend
    on ``n_jobs``.
    """
    loss = Loss.for_task(dataset.task) if loss is None else loss
    loss.check_task(dataset.task)
    run = lambda r: _replicate(dataset, trainer, config, loss, r)  # noqa: E731
    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            errors = list(pool.map(run, range(config.R)))
    else:
        errors = [run(r) for r in range(config.R)]
    return AvteResult(float(np.mean(errors)), tuple(errors))
