import functools

import pytest

from twoweight.field_tower import build_tower
from twoweight.projective import ProjectiveSpace

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def get_space(p, e, n):
    return ProjectiveSpace(build_tower(p, e, n))


@pytest.fixture
def space_32():
    return get_space(3, 1, 2)


@pytest.fixture
def space_22():
    return get_space(2, 1, 2)


@pytest.fixture
def space_33():
    return get_space(3, 1, 3)


@pytest.fixture
def space_23():
    return get_space(2, 1, 3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
