import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qkdgame import attacks  # noqa: E402

# Filled by tests/test_acceptance.py; printed once at the end of the run.
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def registry():
    """A fresh registry so tests can load or replace attacks freely."""
    return attacks.AttackRegistry()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {detail}")
