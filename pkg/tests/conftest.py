import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from regsing.exactalg import FieldDesc  # noqa: E402
from regsing.parser import parse  # noqa: E402

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def op(src: str, p: int = 0):
    return parse(src, FieldDesc(p))


@pytest.fixture
def Q():
    return FieldDesc()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}")
