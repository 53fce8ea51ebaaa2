import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion."""

    def report(number: int, title: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
