import pytest

from crosshammer.fixtures import lists_a, renamed_copy
from crosshammer.matching import compute_matching


@pytest.fixture(scope="session")
def lib_a():
    return lists_a()


@pytest.fixture(scope="session")
def twin(lib_a):
    """lists-A and a renamed, reshuffled copy of it."""
    return renamed_copy(lib_a, "lists-B", seed=1)


@pytest.fixture(scope="session")
def twin_matching(lib_a, twin):
    return compute_matching(lib_a, twin.library)


@pytest.fixture(scope="session")
def twin_context(lib_a, twin, twin_matching):
    from crosshammer.scenarios import build_context

    return build_context(lib_a, twin.library, twin_matching)


# One line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
