import pytest

from focklimit.assembly import QEDModel
from focklimit.config import ModelConfig

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[float, str] = {}


@pytest.fixture(scope="session")
def d1():
    """Desk model D1 (dimension 16 x 81)."""
    return QEDModel(ModelConfig().validate())


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
