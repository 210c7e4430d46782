import numpy as np
import pytest


def bivariate_abs_product(rho: float, n: int, seed: int, chunk: int = 2_000_000):
    """Sample mean and standard error of |h1||h2| for CN(0,1) pairs with correlation rho."""
    rng = np.random.default_rng(seed)
    total = total_sq = 0.0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        z = (rng.standard_normal((2, m)) + 1j * rng.standard_normal((2, m))) / np.sqrt(2)
        h1 = z[0]
        h2 = rho * z[0] + np.sqrt(1 - rho**2) * z[1]
        prod = np.abs(h1) * np.abs(h2)
        total += prod.sum()
        total_sq += (prod**2).sum()
        done += m
    mean = total / n
    var = (total_sq / n - mean**2) * n / (n - 1)
    return mean, np.sqrt(var / n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
