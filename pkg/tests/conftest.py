import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_addoption(parser):
    parser.addoption("--criterion1-seconds", type=float, default=600.0,
                     help="time budget for the exhaustive translation check (criterion 1)")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        notes = [v for k, v in report.user_properties if k == "note"]
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, "; ".join(notes)))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, note in _ACCEPTANCE:
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
