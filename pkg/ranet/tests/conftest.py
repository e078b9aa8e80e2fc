"""Shared fixtures: acceptance recorder, tiny shard sets, a small model.

Acceptance tests register one line each through the ``acceptance``
fixture; the terminal summary prints them with PASS/FAIL.
"""

import numpy as np
import pytest
import torch

from ranet import Ranet, RanetSpec, TrainConfig, train

from ranet_testutil import make_identity_shards

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


@pytest.fixture(scope="session")
def identity_shards(tmp_path_factory):
    return make_identity_shards(tmp_path_factory.mktemp("identity"), count=64)


@pytest.fixture(scope="session")
def small_model(identity_shards) -> Ranet:
    """A quickly trained full-geometry model for enhancement tests."""
    result = train(
        identity_shards,
        RanetSpec(),
        TrainConfig(epochs=2, batch_size=8),
        seed=5,
    )
    return result.model


@pytest.fixture(autouse=True)
def _single_thread():
    # keep torch off oversubscribed threading in the test runner
    torch.set_num_threads(1)
    yield
