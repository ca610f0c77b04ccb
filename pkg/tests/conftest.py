import numpy as np
import pytest

from hybriddj.cv import make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[8, 64, 256])
def grid(request):
    return make_grid(request.param)


def pytest_terminal_summary(terminalreporter):
    from tests_acceptance_registry import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
