import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_LINES = []


def record_acceptance(line: str):
    _LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
