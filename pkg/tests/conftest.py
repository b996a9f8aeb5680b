import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import gf2pls
from gf2pls import _backend

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _backend.get()
    gf2pls.use_backend(request.param)
    yield request.param
    gf2pls.use_backend(previous)


@pytest.fixture
def rng(request):
    seed = abs(hash(request.node.nodeid)) % (1 << 32)
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
