import sys
from pathlib import Path

import pytest

from rarebridge import _backend

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = []


@pytest.fixture(params=_backend.available())
def backend(request):
    previous = _backend.name
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


@pytest.fixture
def criterion():
    """Record one acceptance line; call with (label, passed, detail)."""

    def record(label, passed, detail=""):
        _ACCEPTANCE.append((label, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f"  ({detail})" if detail else ""))
