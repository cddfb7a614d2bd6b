import math

import numpy as np
import pytest
from hypothesis import settings

from holocont.catalog import get_entry

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")


@pytest.fixture(scope="session")
def geometric():
    return get_entry("geometric").spec


@pytest.fixture(scope="session")
def log_spec():
    return get_entry("log").spec


@pytest.fixture(scope="session")
def dilog_spec():
    return get_entry("dilog").spec


@pytest.fixture(scope="session")
def logshift():
    return get_entry("logshift").spec


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


TAU = 2 * math.pi


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
