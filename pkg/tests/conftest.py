import time

import numpy as np
import pytest

_LOG_KEY = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


class Criterion:
    """Context manager for one acceptance criterion: collects checks, times the
    block and records a PASS/FAIL line."""

    def __init__(self, log, num, title, limit):
        self.log, self.num, self.title, self.limit = log, num, title, limit
        self.failures, self.notes = [], []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def check(self, cond, what):
        if not cond:
            self.failures.append(what)
        return bool(cond)

    def note(self, text):
        self.notes.append(text)

    def __exit__(self, et, ev, tb):
        elapsed = time.perf_counter() - self.t0
        reasons = list(self.failures)
        if et is not None:
            reasons.append(f"{et.__name__}: {ev}")
        if elapsed >= self.limit:
            reasons.append(f"took {elapsed:.1f}s, limit {self.limit}s")
        ok = not reasons
        detail = "; ".join(self.notes if ok else reasons)
        line = f"criterion {self.num:2d} {'PASS' if ok else 'FAIL'}  {self.title}  [{elapsed:.2f}s < {self.limit}s]  {detail}"
        self.log.append((self.num, line))
        print(line)
        if et is None and not ok:
            raise AssertionError(detail)
        return False


@pytest.fixture
def criterion(request):
    log = request.config.stash.setdefault(_LOG_KEY, [])

    def make(num, title, limit):
        return Criterion(log, num, title, limit)

    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_LOG_KEY, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(log):
        terminalreporter.write_line(line)
