import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_LINES = []


def record(num, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} ({detail})"
    _LINES.append((num, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
