"""Shared fixtures and the acceptance-summary hook.

Acceptance tests append one line per criterion to ACCEPTANCE_LINES; the
terminal-summary hook prints them even when pytest captures stdout.
"""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
