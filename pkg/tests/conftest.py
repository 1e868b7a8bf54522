import numpy as np
import pytest

from qsteinitz import linalg


@pytest.fixture(autouse=True)
def _default_tolerance():
    linalg.set_tolerance(linalg.DEFAULT_TOLERANCE)
    yield
    linalg.set_tolerance(linalg.DEFAULT_TOLERANCE)


@pytest.fixture
def rng():
    return np.random.default_rng(20260419)


def regular_polygon(n, radius=1.0, phase=0.0):
    t = phase + 2 * np.pi * np.arange(n) / n
    return radius * np.c_[np.cos(t), np.sin(t)]


def random_unit(rng, n, d):
    X = rng.standard_normal((n, d))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
