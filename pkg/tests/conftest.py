import random

import pytest
from hypothesis import settings

from modarith.kernel import empty_context
from modarith.theories import load_theory

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ha_mod():
    return load_theory("ha-mod")


@pytest.fixture
def pure():
    return load_theory("pure")


@pytest.fixture
def pure_ctx(pure):
    return empty_context(pure)


@pytest.fixture
def rng():
    return random.Random(1234)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
