"""Synthetic sparse linear regression with AR(1)-correlated Gaussian predictors."""

from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .data import Dataset, Task

#: ``x3``, ``x7`` and ``x9`` carry signal: y = 1 + 2 x3 + x7 + 3 x9 + noise.
DEFAULT_COEFFICIENTS = {3: 2.0, 7: 1.0, 9: 3.0}
DEFAULT_INTERCEPT = 1.0

#: (rho, p) grid, each at n = 200 and tau = 1.
SCENARIO_GRID = [(rho, p) for p in (17, 250) for rho in (0.0, 0.25, 0.75)]


def ar1_covariance(p, rho, tau=1.0):
    """p x p matrix with entries ``tau * rho ** |i - j|``."""
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    lag = np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    return tau * np.power(float(rho), lag)


def sample_mvn(mu, sigma, n, rng):
    """n rows from N(mu, sigma) as ``mu + Z L^T`` with ``sigma = L L^T``.

    Z is filled with ``Generator.standard_normal`` (NumPy's ziggurat sampler).
    """
    mu = np.asarray(mu, dtype=np.float64)
    L = np.linalg.cholesky(np.asarray(sigma, dtype=np.float64))
    z = rng.standard_normal((n, len(mu)))
    return mu + z @ L.T


@dataclass(frozen=True)
class SimulationConfig:
    """One simulated scenario.

    ``coefficients`` maps 1-based variable numbers (matching the column names
    ``x1 .. xp``) to slopes.  ``mu`` defaults to a vector of ones.
    """

    n: int = 200
    p: int = 17
    rho: float = 0.0
    tau: float = 1.0
    mu: tuple | None = None
    coefficients: dict = field(default_factory=lambda: dict(DEFAULT_COEFFICIENTS))
    intercept: float = DEFAULT_INTERCEPT
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be nonnegative")
        if self.mu is not None and len(self.mu) != self.p:
            raise ValueError(f"mu has length {len(self.mu)}, expected {self.p}")
        bad = [k for k in self.coefficients if not 1 <= k <= self.p]
        if bad:
            raise ValueError(f"coefficient indices {bad} outside 1..{self.p}")

    def beta(self):
        """Dense length-p slope vector."""
        beta = np.zeros(self.p)
        for k, v in self.coefficients.items():
            beta[k - 1] = v
        return beta

    def as_dict(self):
        return {
            "n": self.n, "p": self.p, "rho": self.rho, "tau": self.tau,
            "mu": None if self.mu is None else list(self.mu),
            "coefficients": {str(k): v for k, v in sorted(self.coefficients.items())},
            "intercept": self.intercept, "noise_sd": self.noise_sd, "seed": self.seed,
        }


def paper_scenarios(seed=0):
    return [SimulationConfig(n=200, p=p, rho=rho, tau=1.0, seed=seed) for rho, p in SCENARIO_GRID]


def simulate_regression(config):
    rng = _rng.substream(config.seed, _rng.SIMULATION)
    mu = np.ones(config.p) if config.mu is None else np.asarray(config.mu, dtype=np.float64)
    X = sample_mvn(mu, ar1_covariance(config.p, config.rho, config.tau), config.n, rng)
    y = config.intercept + X @ config.beta()
    if config.noise_sd > 0:
        y = y + config.noise_sd * rng.standard_normal(config.n)
    names = [f"x{j + 1}" for j in range(config.p)]
    return Dataset(X, y, names, Task.regression())
