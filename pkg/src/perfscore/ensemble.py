"""Random-subspace ensembles with out-of-bag member scores.

Each member is fit on a bootstrap sample of the rows restricted to a random
``d``-subset of the columns, and scored by its mean loss on the rows the
bootstrap left out.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _rng, learners
from .evaluation import Loss
from .learners import BaseLearnerSpec

#: Bootstrap redraws allowed for a member whose out-of-bag set comes up empty.
MAX_REDRAWS = 100


class EmptyOOBError(RuntimeError):
    """A member's out-of-bag set is empty so its score is undefined."""


def default_threads():
    try:
        return max(1, int(os.environ.get("PERFSCORE_THREADS", "1")))
    except ValueError:
        return 1


def default_d(p, task):
    return math.ceil(math.sqrt(p)) if task.is_classification else math.ceil(p / 3)


@dataclass(frozen=True)
class EnsembleConfig:
    B: int = 500
    d: int | None = None  # None: ceil(sqrt(p)) for classification, ceil(p/3) for regression
    learner: BaseLearnerSpec = field(default_factory=BaseLearnerSpec)
    seed: int = 0

    def __post_init__(self):
        if self.B < 1:
            raise ValueError("B must be >= 1")
        if self.d is not None and self.d < 1:
            raise ValueError("d must be >= 1")

    def resolve(self, p, task):
        """Copy with ``d`` filled in and checked against ``p`` and ``task``."""
        d = default_d(p, task) if self.d is None else self.d
        if d > p:
            raise ValueError(f"d={d} exceeds the number of variables p={p}")
        self.learner.validate(task)
        return EnsembleConfig(self.B, d, self.learner, self.seed)

    def as_dict(self):
        return {"B": self.B, "d": self.d, "learner": self.learner.as_dict(), "seed": self.seed}


@dataclass(frozen=True, eq=False)
class EnsembleMember:
    model: object
    indicator: np.ndarray  # length-p bool
    in_bag: np.ndarray  # n row indices drawn with replacement
    oob: np.ndarray  # sorted rows never drawn
    oob_score: float

    @property
    def active(self):
        return np.flatnonzero(self.indicator)


@dataclass(frozen=True, eq=False)
class Ensemble:
    members: list
    config: EnsembleConfig
    p: int
    task: object
    loss: Loss
    dataset_fingerprint: str

    @property
    def B(self):
        return len(self.members)

    def indicators(self):
        """B x p boolean matrix of member subspaces."""
        return np.array([m.indicator for m in self.members], dtype=bool)

    def scores(self):
        return np.array([m.oob_score for m in self.members], dtype=np.float64)

    def selection_counts(self):
        """``B_j``: how many members include each variable."""
        return self.indicators().sum(axis=0)


def draw_bootstrap(n, rng):
    """n uniform draws with replacement from ``range(n)`` and the rows never drawn."""
    if n < 1:
        raise ValueError("n must be >= 1")
    in_bag = rng.integers(0, n, size=n)
    drawn = np.zeros(n, dtype=bool)
    drawn[in_bag] = True
    return in_bag, np.flatnonzero(~drawn)


def draw_subspace(p, d, rng):
    """Uniform random ``d``-subset of ``range(p)`` as a length-``p`` indicator."""
    if not 1 <= d <= p:
        raise ValueError(f"need 1 <= d <= p, got d={d}, p={p}")
    gamma = np.zeros(p, dtype=bool)
    gamma[rng.choice(p, size=d, replace=False)] = True
    return gamma


def _oob_loss(model, active, oob, dataset, loss):
    if len(oob) == 0:
        raise EmptyOOBError("member has no out-of-bag rows")
    X = dataset.features[np.ix_(oob, active)]
    return loss.mean(dataset.response[oob], model.predict(X))


def oob_score(member, dataset, loss):
    """Mean loss of ``member`` over its out-of-bag rows."""
    return _oob_loss(member.model, member.active, member.oob, dataset, loss)


def build_member(dataset, config, b, loss):
    rng = _rng.substream(config.seed, _rng.MEMBER, b)
    for _ in range(MAX_REDRAWS + 1):
        in_bag, oob = draw_bootstrap(dataset.n, rng)
        if len(oob):
            break
    else:
        raise EmptyOOBError(f"member {b}: out-of-bag set empty after {MAX_REDRAWS} redraws "
                            f"(n={dataset.n})")
    gamma = draw_subspace(dataset.p, config.d, rng)
    active = np.flatnonzero(gamma)
    X = dataset.features[np.ix_(in_bag, active)]
    model = learners.fit(config.learner, X, dataset.response[in_bag], dataset.task)
    return EnsembleMember(model, gamma, in_bag, oob, _oob_loss(model, active, oob, dataset, loss))


def train_ensemble(dataset, config=EnsembleConfig(), loss=None, n_jobs=None):
    """Fit ``config.B`` random-subspace members on ``dataset``.

    Member ``b`` draws everything from the stream keyed by ``(seed, b)``, so
    the result is the same for any ``n_jobs`` (default: ``PERFSCORE_THREADS``).
    """
    config = config.resolve(dataset.p, dataset.task)
    loss = Loss.for_task(dataset.task) if loss is None else loss
    loss.check_task(dataset.task)
    n_jobs = default_threads() if n_jobs is None else n_jobs
    build = lambda b: build_member(dataset, config, b, loss)  # noqa: E731
    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            members = list(pool.map(build, range(config.B)))
    else:
        members = [build(b) for b in range(config.B)]
    return Ensemble(members, config, dataset.p, dataset.task, loss, dataset.fingerprint())
