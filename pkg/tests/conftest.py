import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from radialspec import sturm  # noqa: E402
from radialspec.geometry import constant_warp  # noqa: E402
from radialspec.presets import preset_warp  # noqa: E402

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def solution(preset, n, lam, zeros=100):
    """Shared shooting solutions; ``preset='constant'`` is the v = 1 hook."""
    warp = constant_warp(1.0) if preset == "constant" else preset_warp(preset)
    return sturm.integrate(sturm.SLProblem(warp, n, lam, warp.t0), zeros_wanted=zeros)


@pytest.fixture(scope="session")
def bounded_exp():
    return preset_warp("bounded-exp")


@pytest.fixture(scope="session")
def cos_tan():
    return preset_warp("paper-example")


@pytest.fixture
def hook():
    return constant_warp(1.0)


@pytest.fixture
def acceptance_line():
    def emit(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
