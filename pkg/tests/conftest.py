import numpy as np
import pytest
from hypothesis import settings

from mixconc import fixtures
from mixconc.process import build_markov_joint

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def f1():
    return fixtures.f1()


@pytest.fixture
def f1_joint():
    return build_markov_joint(fixtures.f1())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
