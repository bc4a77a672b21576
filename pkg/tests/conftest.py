import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one acceptance line: ``report(number, title, passed, detail)``."""
    def _report(number, title, passed, detail=""):
        line = f"criterion {number:>2} {title}: {'PASS' if passed else 'FAIL'}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        return passed
    return _report


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
