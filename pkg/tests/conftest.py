import pytest
from hypothesis import settings

from toricprec.catalog import fixture

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def square():
    return fixture("square")


@pytest.fixture
def trapezoid():
    return fixture("trapezoid", 1, 1, 1)


@pytest.fixture
def graphical():
    return fixture("graphical")



def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
