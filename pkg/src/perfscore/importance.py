"""PERF (permutation-free) and permutation-based variable importance.

PERF compares the mean out-of-bag score of the whole ensemble with the mean
score of the members that include a variable.  A variable whose presence
lowers the error gets a positive score; everything at or below zero is
discarded.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _rng
from .ensemble import default_threads

AS_WRITTEN = "as-written"
ERROR_INCREASE = "error-increase"


@dataclass(frozen=True, eq=False)
class PerfReport:
    """Per-variable scores.

    ``perf`` and ``vi`` hold NaN for variables no member ever included
    (``b_j == 0``); ``vi`` is None when permutation importance was not run.
    ``rank`` is 1 for the largest PERF; never-included variables rank last.
    """

    names: tuple
    perf: np.ndarray
    b_j: np.ndarray
    vi: np.ndarray | None = None
    config: dict | None = None

    @property
    def p(self):
        return len(self.names)

    @property
    def never_selected(self):
        return self.b_j == 0

    @property
    def selected(self):
        return np.nan_to_num(self.perf, nan=0.0) > 0

    @property
    def rank(self):
        key = np.where(self.never_selected, -np.inf, self.perf)
        order = np.argsort(-key, kind="stable")
        rank = np.empty(self.p, dtype=np.int64)
        rank[order] = np.arange(1, self.p + 1)
        return rank

    def top(self, k):
        """Indices of the ``k`` best-ranked variables."""
        return list(np.argsort(self.rank, kind="stable")[:k])


def perf_from_scores(indicators, scores):
    """PERF for every column of a B x p indicator matrix given B member scores.

    Columns with no active member come back as NaN.  Sums are correctly
    rounded, so the result does not depend on the order of the members.
    """
    G = np.asarray(indicators, dtype=bool)
    s = np.asarray(scores, dtype=np.float64)
    b_j = G.sum(axis=0).astype(np.int64)
    overall = math.fsum(s) / len(s)
    perf = np.full(G.shape[1], np.nan)
    for j in np.flatnonzero(b_j):
        perf[j] = overall - math.fsum(s[G[:, j]]) / b_j[j]
    return perf, b_j


def perf_scores(ensemble, names=None):
    perf, b_j = perf_from_scores(ensemble.indicators(), ensemble.scores())
    if names is None:
        names = [f"x{j + 1}" for j in range(ensemble.p)]
    return PerfReport(tuple(names), perf, b_j, config=ensemble.config.as_dict())


def select_variables(report):
    """Indices with strictly positive PERF."""
    return {int(j) for j in np.flatnonzero(report.selected)}


def permuted_oob_score(member, dataset, j, loss, rng=None, permutation=None):
    """OOB mean loss of ``member`` after shuffling column ``j`` of its OOB rows.

    ``j`` is a column of the full dataset and must be active in the member.
    Pass ``permutation`` (positions ``0..|oob|-1``) to fix the shuffle;
    otherwise one is drawn from ``rng``.
    """
    active = member.active
    pos = np.searchsorted(active, j)
    if pos >= len(active) or active[pos] != j:
        raise ValueError(f"variable {j} is not active in this member")
    oob = member.oob
    if permutation is None:
        permutation = rng.permutation(len(oob))
    else:
        permutation = np.asarray(permutation)
        if sorted(permutation.tolist()) != list(range(len(oob))):
            raise ValueError("permutation must be a bijection on the OOB positions")
    X = dataset.features[np.ix_(oob, active)]
    X[:, pos] = X[permutation, pos]
    return loss.mean(dataset.response[oob], member.model.predict(X))


def member_vi(member, dataset, loss, seed, b, n_repeats=1):
    """``s - s_perm`` for each active variable of member ``b``, keyed by column."""
    out = {}
    for j in member.active:
        rng = _rng.substream(seed, _rng.PERMUTATION, b, j)
        permuted = np.mean([permuted_oob_score(member, dataset, j, loss, rng)
                            for _ in range(n_repeats)])
        out[int(j)] = member.oob_score - permuted
    return out


def vi_scores(ensemble, dataset, loss=None, sign_convention=AS_WRITTEN, n_repeats=1, n_jobs=None,
              names=None):
    """PERF report with the permutation importance filled in.

    Each instance is ``s - s_perm`` under ``AS_WRITTEN`` (important variables
    come out negative) and ``s_perm - s`` under ``ERROR_INCREASE``; instances
    are averaged over the members including the variable.
    """
    if sign_convention not in (AS_WRITTEN, ERROR_INCREASE):
        raise ValueError(f"unknown sign convention {sign_convention!r}")
    if dataset.fingerprint() != ensemble.dataset_fingerprint:
        raise ValueError("ensemble was not trained on this dataset")
    loss = ensemble.loss if loss is None else loss
    n_jobs = default_threads() if n_jobs is None else n_jobs
    seed = ensemble.config.seed

    def run(b):
        return member_vi(ensemble.members[b], dataset, loss, seed, b, n_repeats)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            per_member = list(pool.map(run, range(ensemble.B)))
    else:
        per_member = [run(b) for b in range(ensemble.B)]

    instances = [[] for _ in range(ensemble.p)]
    for inst in per_member:
        for j, v in inst.items():
            instances[j].append(v)
    total = np.array([math.fsum(v) for v in instances])
    report = perf_scores(ensemble, names)
    with np.errstate(invalid="ignore", divide="ignore"):
        vi = total / report.b_j
    vi[report.never_selected] = np.nan
    if sign_convention == ERROR_INCREASE:
        vi = -vi
    config = dict(report.config, vi_sign=sign_convention, vi_repeats=n_repeats)
    return replace(report, vi=vi, config=config)
