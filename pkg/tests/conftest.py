import numpy as np
import pytest

from perfscore import SimulationConfig, simulate_regression


@pytest.fixture(scope="session")
def sim17():
    return simulate_regression(SimulationConfig(n=200, p=17, rho=0.0, seed=1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    results = getattr(test_acceptance, "RESULTS", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
