"""Shared fixtures plus the acceptance summary hook.

Acceptance tests register one line each through the ``acceptance`` fixture;
the terminal summary prints them all with PASS/FAIL so a run's verdict can
be read off without scrolling through pytest output.
"""

import numpy as np
import pytest

_ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


class _AcceptanceRecorder:
    def check(self, criterion: str, ok: bool, detail: str = "") -> None:
        """Record one acceptance line, then assert it held."""
        _ACCEPTANCE_LINES.append((criterion, bool(ok), detail))
        assert ok, f"{criterion}: {detail}"


@pytest.fixture(scope="session")
def acceptance() -> _AcceptanceRecorder:
    return _AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _ACCEPTANCE_LINES:
        verdict = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"[{verdict}] {criterion}{suffix}")


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
