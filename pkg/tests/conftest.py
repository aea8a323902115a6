from pathlib import Path

import pytest

from tashkil import default_metrics, default_table

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture(scope="session")
def metrics():
    return default_metrics()


@pytest.fixture(scope="session")
def golden():
    return Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def table():
    return default_table()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"
    elif "test_acceptance.py" in report.nodeid and report.failed:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"{outcome}  {name}")
