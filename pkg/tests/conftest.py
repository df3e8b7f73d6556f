from pathlib import Path

import pytest

from adaptable.syntax import parse_pattern, parse_process

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "adaptable" / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


def P(text):
    return parse_process(text)


def U(text):
    return parse_pattern(text)


# one line per acceptance criterion, printed in the terminal summary
RESULTS: list[tuple[int, bool, float, str]] = []


def record(n, ok, seconds, limit, detail=""):
    passed = bool(ok) and (limit is None or seconds < limit)
    RESULTS.append((n, passed, seconds, detail))
    return passed


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, secs, detail in sorted(RESULTS):
        terminalreporter.write_line(
            f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {secs:7.2f}s  {detail}")
