import time

import pytest

_ACCEPTANCE = {}


class Criterion:
    def __init__(self, number, title, budget_s):
        self.number, self.title, self.budget_s = number, title, budget_s
        self.details = []
        self.start = time.perf_counter()
        self.passed = None

    def note(self, text):
        self.details.append(text)

    def finish(self, ok):
        elapsed = time.perf_counter() - self.start
        in_time = elapsed <= self.budget_s
        self.note(f"runtime {elapsed:.1f}s (budget {self.budget_s:g}s)")
        self.passed = bool(ok) and in_time
        line = self.line()
        print(line)
        assert ok, line
        assert in_time, line

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.title} | " + "; ".join(self.details)


@pytest.fixture
def criterion():
    def make(number, title, budget_s):
        c = Criterion(number, title, budget_s)
        _ACCEPTANCE[number] = c
        return c

    return make


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        c = _ACCEPTANCE[number]
        if c.passed is None:
            c.passed = False
            c.note("did not complete")
        terminalreporter.write_line(c.line())
