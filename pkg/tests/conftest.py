import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from recurrify import corpus  # noqa: E402
from recurrify.model import run_deep  # noqa: E402


@pytest.fixture
def deep():
    """Run a callable on a thread with a large stack."""
    return run_deep


@pytest.fixture(scope="session")
def defs():
    return corpus.all_definitions()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda text: int(text.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
