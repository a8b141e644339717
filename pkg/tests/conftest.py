import pytest

from trapbound.scenarios import LI7_HULET, resolve
from trapbound.units import make_context


@pytest.fixture(scope="session")
def li7_ctx():
    return make_context(145.0, 7.016)


@pytest.fixture(scope="session")
def li7():
    """li7-hulet resolved to trap units (N = 1000, R = 2 a0)."""
    return resolve(LI7_HULET)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
