import pytest
from hypothesis import HealthCheck, settings

from openchainq.exactq import sample_params

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def point():
    return sample_params(11)


@pytest.fixture(scope="session")
def points():
    return [sample_params(s) for s in (21, 22, 23)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
