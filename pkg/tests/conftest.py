import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from buchi import arith  # noqa: E402


@pytest.fixture(autouse=True)
def _reset_cap(monkeypatch):
    monkeypatch.delenv("BUCHI_MAX_MODULUS", raising=False)
    monkeypatch.delenv("BUCHI_JOBS", raising=False)
    arith.set_max_modulus(None)
    yield
    arith.set_max_modulus(None)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
