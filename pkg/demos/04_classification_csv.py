"""
Classification from a CSV file
==============================

Writes a small two-class problem to CSV, loads it back (the integer target is
detected as categorical), and scores it with a tree ensemble under zero-one
loss.  The command-line equivalent is

    perfscore score --data two_class.csv --target label --learner tree --out report.json
"""

import tempfile
from pathlib import Path

import numpy as np

from perfscore import Dataset, EnsembleConfig, Task, load_csv, train_ensemble, vi_scores, write_csv
from perfscore.importance import ERROR_INCREASE
from perfscore.learners import BaseLearnerSpec

rng = np.random.default_rng(7)
X = rng.normal(size=(400, 8))
label = np.where(X[:, 0] - X[:, 4] + 0.5 * rng.normal(size=400) > 0, 2, 1)
source = Dataset(X, label, [f"f{j}" for j in range(8)], Task.classification(2))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "two_class.csv"
    write_csv(source, path, target="label")
    data = load_csv(path, "label")

print("task:", data.task)
ensemble = train_ensemble(data, EnsembleConfig(B=300, learner=BaseLearnerSpec("tree"), seed=3))
report = vi_scores(ensemble, data, sign_convention=ERROR_INCREASE, names=data.feature_names)
for j in report.top(data.p):
    print(f"{report.names[j]:>3}  PERF {report.perf[j]:+.4f}  VI {report.vi[j]:+.4f}"
          f"  {'kept' if report.selected[j] else ''}")
