"""Permutation-free (PERF) and permutation-based variable importance for
random-subspace ensembles of arbitrary base learners."""

__version__ = "0.1.0"

from .data import Dataset, DataError, Task, load_csv, split, write_csv
from .ensemble import (Ensemble, EnsembleConfig, EnsembleMember, draw_bootstrap, draw_subspace,
                       oob_score, train_ensemble)
from .evaluation import AvteConfig, AvteResult, Loss, avte, squared, zero_one
from .importance import (AS_WRITTEN, ERROR_INCREASE, PerfReport, perf_from_scores, perf_scores,
                         permuted_oob_score, select_variables, vi_scores)
from .learners import BaseLearnerSpec, fit, fit_ols, fit_tree, predict_linear, predict_tree
from .simulation import (SimulationConfig, ar1_covariance, paper_scenarios, sample_mvn,
                         simulate_regression)
