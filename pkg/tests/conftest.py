import numpy as np
import pytest
from hypothesis import settings

from phonon_raman.units_params import derive_condensate

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def unit_params():
    return derive_condensate(1.0, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance report -------------------------------------------------------
# Each acceptance test records one line; the lines are echoed as they are
# produced and repeated together at the end of the run.

import time

_LINES = pytest.StashKey[list]()
_START = pytest.StashKey[float]()
_FINISH = pytest.StashKey[tuple]()
SUITE_BUDGET_S = 60.0


def pytest_configure(config):
    config.stash[_LINES] = []
    config.stash[_START] = time.perf_counter()


@pytest.fixture
def criterion(request, capsys):
    def report(number, ok, text):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text}"
        request.config.stash[_LINES].append(line)
        with capsys.disabled():
            print("\n    " + line)
        return ok

    return report


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - session.config.stash[_START]
    session.config.stash[_FINISH] = (elapsed, session.testscollected)
    if session.config.stash[_LINES] and session.testscollected > 150 and elapsed >= SUITE_BUDGET_S:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash[_LINES]
    if not lines:
        return
    elapsed, n_tests = config.stash[_FINISH]
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    verdict = "PASS" if elapsed < SUITE_BUDGET_S else "FAIL"
    terminalreporter.write_line(
        f"{verdict}  criterion 14: suite wall time {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s, "
        f"{n_tests} tests collected)"
    )
