"""Shared pytest plumbing.

The acceptance suite reports one PASS/FAIL line per criterion. Those
lines are printed inside the tests (visible with ``pytest -s``) and
collected here so they also appear in the terminal summary of a normal
captured run.
"""

import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_record():
    """Callable that registers a criterion line for the final summary."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
