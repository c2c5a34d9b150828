from __future__ import annotations

import pytest

from tracecodes.codegen import make_spec
from tracecodes.field import field_for

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def f4():
    return field_for(3, 1)


@pytest.fixture(scope="session")
def f16():
    return field_for(5, 1)


@pytest.fixture(scope="session")
def f64():
    return field_for(3, 2)


@pytest.fixture(scope="session")
def fields(f4, f16, f64):
    return {4: f4, 16: f16, 64: f64}


@pytest.fixture
def spec():
    return make_spec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
