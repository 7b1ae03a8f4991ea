"""Shared pytest plumbing.

The acceptance tests push one PASS/FAIL line each onto ``_checklist``; the
terminal-summary hook replays them after capture ends so the checklist is
visible in a plain ``pytest -v`` run.
"""

import pytest

_checklist = []


@pytest.fixture
def checklist():
    return _checklist


def pytest_terminal_summary(terminalreporter):
    if _checklist:
        terminalreporter.write_sep("-", "acceptance checklist")
        for line in _checklist:
            terminalreporter.write_line(line)
