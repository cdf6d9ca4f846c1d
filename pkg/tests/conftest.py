import pytest

from supercurve.curve import Curve


@pytest.fixture(scope="session")
def curve():
    """The reference truncation used throughout: Nz=20, Nq=16, K=8."""
    return Curve(20, 16, 8)


@pytest.fixture(scope="session")
def small_curve():
    return Curve(10, 6, 8)


def pytest_configure(config):
    config.acceptance_lines = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
