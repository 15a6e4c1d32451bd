import re

import pytest

_RESULTS: list[str] = []


@pytest.fixture
def report():
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    def _report(number: str, label: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {label} -- {detail}"
        _RESULTS.append(line)
        print(line)
        return ok
    return _report


def _key(line: str):
    m = re.search(r"criterion (\d+)(\w?)", line)
    return (int(m.group(1)), m.group(2)) if m else (99, "")


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_RESULTS, key=_key):
            terminalreporter.write_line(line)
