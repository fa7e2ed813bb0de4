import os

import pytest
from hypothesis import HealthCheck, settings

from kdendro import operads, presheaf

settings.register_profile("dev", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(scope="session")
def assoc4():
    return operads.assoc(4)


@pytest.fixture(scope="session")
def assoc5():
    return operads.assoc(5)


@pytest.fixture(scope="session")
def comm4():
    return operads.comm(4)


@pytest.fixture(scope="session")
def cospan():
    """a --f--> b <--h-- c: three objects, five morphisms."""
    return operads.free_category(["a", "b", "c"], {"f": ("a", "b"), "h": ("c", "b")})


@pytest.fixture(scope="session")
def F_assoc(assoc4):
    return presheaf.OperadicPresheaf(assoc4)


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {line}")
