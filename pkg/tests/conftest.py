import time

import numpy as np
import pytest

from tests.acceptance_log import LINES, record_criterion

SUITE_BUDGET_S = 120.0
_START = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_sessionstart(session):
    _START["t"] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    # Criterion 12 also bounds the wall time of the whole test run. Only
    # judged when the acceptance module ran as part of the session.
    if not LINES:
        return
    elapsed = time.perf_counter() - _START["t"]
    ok = record_criterion("C12c full suite runtime", elapsed < SUITE_BUDGET_S,
                          f"{elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")
    if not ok:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
