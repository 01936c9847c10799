import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def max_abs(a, b=0):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def report(name: str, passed: bool, detail: str):
        line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
