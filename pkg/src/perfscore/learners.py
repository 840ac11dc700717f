"""Base learners used as ensemble atoms: OLS regression and a binary decision tree.

Both learners see only the active columns of their ensemble member, so all
column indices stored in a fitted model are local to that sub-design.
"""

from dataclasses import dataclass

import numpy as np

OLS = "ols"
TREE = "tree"
VARIANCE = "variance"
GINI = "gini"


@dataclass(frozen=True)
class BaseLearnerSpec:
    kind: str = OLS
    max_depth: int | None = 8
    min_leaf: int = 5
    impurity: str | None = None  # None: variance for regression, gini for classification

    def __post_init__(self):
        if self.kind not in (OLS, TREE):
            raise ValueError(f"unknown learner {self.kind!r}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be positive")
        if self.impurity not in (None, VARIANCE, GINI):
            raise ValueError(f"unknown impurity {self.impurity!r}")

    def validate(self, task):
        if self.kind == OLS and task.is_classification:
            raise ValueError("OLS base learner is only available for regression tasks")
        if self.kind == TREE and self.impurity is not None:
            if (self.impurity == GINI) != task.is_classification:
                raise ValueError(f"{self.impurity} impurity does not apply to a {task} task")

    def impurity_for(self, task):
        if self.impurity is not None:
            return self.impurity
        return GINI if task.is_classification else VARIANCE

    def as_dict(self):
        d = {"kind": self.kind}
        if self.kind == TREE:
            d.update(max_depth=self.max_depth, min_leaf=self.min_leaf, impurity=self.impurity)
        return d


# --------------------------------------------------------------------------- OLS


@dataclass(frozen=True)
class LinearModel:
    intercept: float
    coef: np.ndarray

    @property
    def n_features(self):
        return len(self.coef)

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} columns, got shape {X.shape}")
        return self.intercept + X @ self.coef


def fit_ols(X, y):
    """Least-squares fit of an intercept plus one slope per column.

    Rank-deficient designs (duplicated or constant columns, fewer rows than
    columns) get the minimum-norm solution instead of an error.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m, d = X.shape
    if m < 1 or d < 1:
        raise ValueError("need at least one row and one column")
    A = np.empty((m, d + 1))
    A[:, 0] = 1.0
    A[:, 1:] = X
    beta = np.linalg.lstsq(A, y, rcond=None)[0]
    return LinearModel(float(beta[0]), beta[1:])


def predict_linear(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"expected a vector of length {model.n_features}, got shape {x.shape}")
    return float(model.intercept + x @ model.coef)


# -------------------------------------------------------------------------- tree

_LEAF = -1


@dataclass(frozen=True)
class TreeModel:
    """Array-encoded binary tree; node 0 is the root.

    Internal nodes route ``x[feature] <= threshold`` to ``left``, otherwise to
    ``right``.  Leaves have ``feature == -1`` and predict ``value``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    impurity: np.ndarray
    n_features: int
    classification: bool

    @property
    def n_nodes(self):
        return len(self.feature)

    def is_leaf(self, node):
        return self.feature[node] == _LEAF

    def apply(self, X):
        """Index of the leaf each row of ``X`` lands in."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} columns, got shape {X.shape}")
        node = np.zeros(len(X), dtype=np.intp)
        active = self.feature[node] != _LEAF
        while active.any():
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active[idx] = self.feature[node[idx]] != _LEAF
        return node

    def predict(self, X):
        out = self.value[self.apply(X)]
        return out.astype(np.int64) if self.classification else out


def _impurity(y, kind):
    if kind == VARIANCE:
        return float(np.var(y))
    _, counts = np.unique(y, return_counts=True)
    p = counts / len(y)
    return float(1.0 - p @ p)


def _leaf_value(y, classification):
    if classification:
        labels, counts = np.unique(y, return_counts=True)
        return float(labels[np.argmax(counts)])  # argmax keeps the smallest label on ties
    return float(np.mean(y))


def split_costs(x, y, kind, min_leaf=1):
    """All admissible splits of one column, in increasing threshold order.

    Returns ``(thresholds, costs)`` where ``cost`` is the size-weighted mean
    child impurity.  Thresholds are midpoints between consecutive distinct
    sorted values leaving at least ``min_leaf`` rows on each side.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    m = len(xs)
    # split position i puts xs[:i] left
    pos = np.arange(1, m)
    ok = (xs[1:] > xs[:-1]) & (pos >= min_leaf) & (m - pos >= min_leaf)
    pos = pos[ok]
    if len(pos) == 0:
        return np.empty(0), np.empty(0)
    n_left = pos.astype(np.float64)
    n_right = m - n_left
    if kind == VARIANCE:
        yc = ys - ys.mean()
        s1 = np.cumsum(yc)
        s2 = np.cumsum(yc * yc)
        sl, ql = s1[pos - 1], s2[pos - 1]
        sr, qr = s1[-1] - sl, s2[-1] - ql
        sse = (ql - sl * sl / n_left) + (qr - sr * sr / n_right)
        costs = np.maximum(sse, 0.0) / m
    else:
        _, codes = np.unique(ys, return_inverse=True)
        onehot = np.zeros((m, codes.max() + 1))
        onehot[np.arange(m), codes] = 1.0
        cl = np.cumsum(onehot, axis=0)[pos - 1]
        cr = onehot.sum(axis=0) - cl
        weighted = (n_left - (cl * cl).sum(axis=1) / n_left) + (n_right - (cr * cr).sum(axis=1) / n_right)
        costs = weighted / m
    lo, hi = xs[pos - 1], xs[pos]
    thr = (lo + hi) / 2.0
    thr = np.where(thr < hi, thr, lo)  # midpoint may round up to hi for adjacent floats
    return thr, costs


def _tol(v):
    return 1e-12 * max(1.0, abs(v))


def best_split(X, y, kind, min_leaf=1):
    """Lowest-cost (column, threshold, cost); ties go to the lowest column, then threshold."""
    best = None
    for j in range(X.shape[1]):
        thr, costs = split_costs(X[:, j], y, kind, min_leaf)
        if len(costs) == 0:
            continue
        c = costs.min()
        k = int(np.flatnonzero(costs <= c + _tol(c))[0])
        if best is None or costs[k] < best[2] - _tol(best[2]):
            best = (j, float(thr[k]), float(costs[k]))
    return best


def fit_tree(X, y, params=BaseLearnerSpec(kind=TREE), classification=False):
    """Greedy recursive partitioning.

    Each node takes the split minimising weighted child impurity and becomes
    a leaf at ``params.max_depth``, when it is pure, or when no split leaves
    ``params.min_leaf`` rows on both sides.  Leaves predict the mean response
    (regression) or the majority label, ties going to the smallest label.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    m, d = X.shape
    if m < 1:
        raise ValueError("need at least one row")
    kind = params.impurity or (GINI if classification else VARIANCE)
    feature, threshold, left, right, value, n_samples, impurity = ([] for _ in range(7))

    def new_node(rows):
        feature.append(_LEAF)
        threshold.append(np.nan)
        left.append(_LEAF)
        right.append(_LEAF)
        value.append(_leaf_value(y[rows], classification))
        n_samples.append(len(rows))
        impurity.append(_impurity(y[rows], kind))
        return len(feature) - 1

    stack = [(new_node(np.arange(m)), np.arange(m), 0)]
    while stack:
        node, rows, depth = stack.pop()
        if params.max_depth is not None and depth >= params.max_depth:
            continue
        yr = y[rows]
        if len(rows) < 2 * params.min_leaf or np.all(yr == yr[0]):
            continue
        found = best_split(X[rows], yr, kind, params.min_leaf)
        if found is None:
            continue
        j, thr, _ = found
        go_left = X[rows, j] <= thr
        lrows, rrows = rows[go_left], rows[~go_left]
        feature[node] = j
        threshold[node] = thr
        left[node] = new_node(lrows)
        right[node] = new_node(rrows)
        stack.append((right[node], rrows, depth + 1))
        stack.append((left[node], lrows, depth + 1))

    return TreeModel(
        feature=np.array(feature, dtype=np.intp),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.intp),
        right=np.array(right, dtype=np.intp),
        value=np.array(value, dtype=np.float64),
        n_samples=np.array(n_samples, dtype=np.intp),
        impurity=np.array(impurity, dtype=np.float64),
        n_features=d,
        classification=classification,
    )


def predict_tree(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"expected a vector of length {model.n_features}, got shape {x.shape}")
    out = model.predict(x[None, :])[0]
    return int(out) if model.classification else float(out)


# ----------------------------------------------------------------- dispatch


def fit(spec, X, y, task):
    """Fit the learner described by ``spec``; the result has ``predict(X)``."""
    spec.validate(task)
    if spec.kind == OLS:
        return fit_ols(X, y)
    return fit_tree(X, y, spec, classification=task.is_classification)
