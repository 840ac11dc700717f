"""
Keep the positive scores, then measure test error
=================================================

Select variables with PERF > 0 and compare the average test error of a single
OLS model on the selected columns against one using every column.
"""

import numpy as np

from perfscore import (AvteConfig, EnsembleConfig, SimulationConfig, avte, fit_ols, perf_scores,
                       select_variables, simulate_regression, train_ensemble)

data = simulate_regression(SimulationConfig(n=200, p=60, rho=0.25, seed=4))
report = perf_scores(train_ensemble(data, EnsembleConfig(B=1000, d=8, seed=4)))
keep = sorted(select_variables(report))
print("selected:", [data.feature_names[j] for j in keep])


def ols(train):
    return fit_ols(train.features, train.response).predict


cfg = AvteConfig(R=50, test_fraction=1 / 3, seed=0)
full = avte(data, ols, cfg)
reduced = avte(data.subset_columns(keep), ols, cfg)
print(f"AVTE all {data.p} columns: {full.value:.3f}")
print(f"AVTE {len(keep)} selected:   {reduced.value:.3f}  (replicate sd {np.std(reduced.replicates):.3f})")
