import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from p2q.groups import from_table

import oracles

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def s3():
    return from_table(np.array(oracles.symmetric_group_table(3)))


@pytest.fixture(scope="session")
def a4():
    return from_table(np.array(oracles.alternating_group_table(4)))


# acceptance criteria ---------------------------------------------------------------

_CRITERIA = {}


class _Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        slow = elapsed > self.limit
        ok = exc_type is None and not slow
        detail = "; ".join(self.notes)
        if exc_type is not None:
            detail = f"{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        elif slow:
            detail = f"over the {self.limit:.0f} s limit"
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'} [{elapsed:.1f} s] {self.title}"
        if detail:
            line += f" ({detail})"
        _CRITERIA[self.number] = line
        print("\n" + line)
        if slow and exc_type is None:
            raise AssertionError(line)
        return False


@pytest.fixture
def criterion(capsys):
    def make(number, title, limit):
        return _Criterion(number, title, limit)

    with capsys.disabled():
        yield make


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
