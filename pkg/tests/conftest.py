import numpy as np
import pytest

from wco_reciprocal.measure_space import build_space, build_symbol


@pytest.fixture
def s1():
    return build_space(["0", "1", "2"], [1.0, 1.0, 1.0])


@pytest.fixture
def sigma1(s1):
    """phi sends every atom to 1, w = (1, 2, 0)."""
    return build_symbol(s1, [1, 1, 1], [1.0, 2.0, 0.0])


@pytest.fixture
def identity(s1):
    return build_symbol(s1, [0, 1, 2], [1.0, 1.0, 1.0])


@pytest.fixture
def zero_weight(s1):
    return build_symbol(s1, [1, 2, 0], [0.0, 0.0, 0.0])


def brute_density(symbol):
    """h(x) from the change-of-variables identity, one atom at a time.

    Integrating chi_{x} o phi against mu_w gives h(x) mu(x); we evaluate that
    integral with an explicit loop, independent of the vectorised fiber sums.
    """
    mu = symbol.space.masses
    n = symbol.size
    h = np.zeros(n)
    for x in range(n):
        total = 0.0
        for y in range(n):
            if symbol.phi[y] == x:
                total += abs(symbol.weight[y]) ** 2 * mu[y]
        h[x] = total / mu[x]
    return h


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
