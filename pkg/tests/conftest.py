import os

import pytest
from hypothesis import HealthCheck, settings

from deforma import io

FIXTURES = os.path.join(os.path.dirname(io.__file__), "fixtures")

settings.register_profile(
    "default", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

ASSOCIATIVE = ["dual_numbers", "truncated_x3", "m2", "nc2", "xy"]
COMMUTATIVE = ["dual_numbers", "truncated_x3", "xy"]
DEFORMATIONS = ["dual_numbers_deformation", "truncated_x3_deformation",
                "xy_poisson_deformation", "m2_gauge_deformation"]


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, f"{name}.json")


def load_fixture(name: str):
    return io.load(fixture_path(name))


@pytest.fixture(params=ASSOCIATIVE)
def assoc_algebra(request):
    return load_fixture(request.param)


# acceptance results collected for the terminal summary
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {label}")
