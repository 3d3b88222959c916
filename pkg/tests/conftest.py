import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from locfrob import exactla as la

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIELDS = [la.QQ, la.GF(2), la.GF(3), la.GF(5)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdicts, one line per criterion, after the run."""
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 10):
        terminalreporter.write_line(mod.RESULTS.get(n, f"FAIL criterion {n}: did not run to completion"))
