from fractions import Fraction

import pytest
from hypothesis import settings

from quartic_hasse.arith import ParamTuple
from quartic_hasse.conic import construct

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

EXAMPLE_B = (-1, 17, 89, 257, 769)


@pytest.fixture(scope="session")
def example_params():
    return ParamTuple(EXAMPLE_B, Fraction(-1, 257 * 769))


@pytest.fixture(scope="session")
def example_bundle(example_params):
    return construct(example_params.a, example_params.u)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
