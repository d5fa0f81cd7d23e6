import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from orthotime import (DiscreteSpectralState, construct_intelligent, uniform_density)

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, passed: bool, detail: str = "") -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] AC{criterion:02d} {title}"
    if detail:
        line += f" :: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def three_level():
    return DiscreteSpectralState(1.0, [0.0, 1.0, 2.0], [0.5, 1 / math.sqrt(2), 0.5])


@pytest.fixture
def intelligent():
    return construct_intelligent(1.0, 0.0, 1.0)


@pytest.fixture
def uniform64():
    return uniform_density(0.0, 1.0, 64, 1.0)
