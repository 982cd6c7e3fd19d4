import numpy as np
import pytest

_RESULTS = []


@pytest.fixture
def rng():
    return np.random.default_rng(20201016)


@pytest.fixture
def report():
    """Record one acceptance line: ``report(label, passed, detail)``."""

    def _record(label, passed, detail=""):
        _RESULTS.append((label, bool(passed), detail))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, passed, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")
