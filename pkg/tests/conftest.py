import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        prev = _ACCEPTANCE.get(number, (title, "PASS", []))
        status = prev[1] if report.outcome == "passed" else "FAIL"
        notes = prev[2] + ([getattr(report, "wasxfail", "")] if hasattr(report, "wasxfail") else [])
        _ACCEPTANCE[number] = (title, status, notes)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, notes = _ACCEPTANCE[number]
        suffix = "".join(f" (known: {n.removeprefix('reason: ')})" for n in notes)
        terminalreporter.write_line(f"[{status}] AC{number}: {title}{suffix}")
