"""
Same score, different atoms
===========================

PERF only needs a score per member, so the base learner is interchangeable.
Here a nonlinear response is scored with OLS members and with tree members.
"""

import numpy as np

from perfscore import (BaseLearnerSpec, Dataset, EnsembleConfig, Task, perf_scores,
                       train_ensemble)

rng = np.random.default_rng(0)
n, p = 300, 10
X = rng.uniform(-1, 1, size=(n, p))
# x1 enters linearly, x2 only through its square, the rest is noise
y = 2 * X[:, 0] + 3 * X[:, 1] ** 2 + 0.3 * rng.normal(size=n)
data = Dataset(X, y, [f"x{j + 1}" for j in range(p)], Task.regression())

for learner in (BaseLearnerSpec("ols"), BaseLearnerSpec("tree", max_depth=4, min_leaf=5)):
    report = perf_scores(train_ensemble(data, EnsembleConfig(B=400, d=3, learner=learner, seed=2)))
    print(f"{learner.kind:5}", " ".join(f"{s:+.3f}" for s in report.perf))

# OLS cannot see the quadratic x2 effect; the trees can.
