import time
from dataclasses import replace

import pytest
from hypothesis import HealthCheck, settings

from octoarm import ArmScenario, FluidParams, tension_sweep

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def criterion_log():
    """Collects one line per acceptance criterion for the terminal summary."""

    def record(number, ok, detail):
        ACCEPTANCE_LINES.append((number, f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def default_scenario():
    return ArmScenario()


def _timed_sweep(scenario):
    start = time.perf_counter()
    result = tension_sweep(scenario, (0.0, 20.0), 0.5)
    return result, time.perf_counter() - start


@pytest.fixture(scope="session")
def default_sweep(default_scenario):
    """Full 0..20 N sweep at 0.2 m/s with its wall time."""
    return _timed_sweep(default_scenario)


@pytest.fixture(scope="session")
def fast_flow_sweep(default_scenario):
    """Full 0..20 N sweep at 0.4 m/s with its wall time."""
    return _timed_sweep(replace(default_scenario, fluid=FluidParams(free_stream_mps=0.4)))
