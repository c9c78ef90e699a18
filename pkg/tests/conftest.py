import numpy as np
import pytest

from depclust import svd
from depclust.synthetic import example_matrix, example_target


@pytest.fixture(scope="session")
def example_A():
    return example_matrix(seed=0)


@pytest.fixture(scope="session")
def example_factors(example_A):
    return svd(example_A)


@pytest.fixture(scope="session")
def example_b(example_A):
    return example_target(example_A)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# lines recorded by test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
