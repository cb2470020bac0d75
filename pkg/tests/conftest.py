"""Shared fixtures and the acceptance-summary reporter.

Acceptance tests call ``acceptance_report`` with their criterion number
and verdict; the collected lines are echoed in the terminal summary so
they survive output capture.
"""

from __future__ import annotations

import pytest

import helpers

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture()
def g1_game():
    return helpers.g1()


@pytest.fixture()
def g2_game():
    return helpers.g2()


@pytest.fixture()
def one_mode_spec():
    return helpers.one_mode_spec()


@pytest.fixture(scope="session")
def acceptance_report():
    def report(criterion: int, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        line = f"ACCEPTANCE {criterion}: {status}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line, flush=True)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
