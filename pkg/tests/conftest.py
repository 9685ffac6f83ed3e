from pathlib import Path

import pytest

from explorable_heap import load_tree_file, random_increment_source, two_path_source

FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_TREES = ("figure1", "chain", "complete")

# Filled by test_acceptance; printed once at the end of the session.
ACCEPTANCE_LINES: dict[int, str] = {}


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.tree")


@pytest.fixture
def two_path():
    return two_path_source()


@pytest.fixture
def figure1():
    return load_tree_file(fixture_path("figure1"))


@pytest.fixture(params=[0, 7, 42])
def random_tree(request):
    return random_increment_source(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
