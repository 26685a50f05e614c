from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# (criterion number, passed, detail) appended by test_acceptance.py
ACCEPTANCE = []


@pytest.fixture
def fixture_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
