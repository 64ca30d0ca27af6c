import pytest

from boxworld.theory import SystemSpec

ONE_GBIT = SystemSpec.of([2, 2])
TWO_GBITS = SystemSpec.of([2, 2], [2, 2])
HYBRID = SystemSpec.of([2, 2], [2])
TRIT_PAIR = SystemSpec.of([3, 3])
THREE_BITS = SystemSpec.of([2, 2, 2])
CBIT = SystemSpec.of([2])

_CRITERIA: list[str] = []


def record_criterion(line: str) -> None:
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def two_gbit_vertices():
    from boxworld.polytope import enumerate_vertices

    return enumerate_vertices(TWO_GBITS)


@pytest.fixture(scope="session")
def two_gbit_group():
    from boxworld.search import search_reversible_group

    return search_reversible_group(TWO_GBITS)


@pytest.fixture(scope="session")
def two_gbit_trivial_group():
    from boxworld.transforms import generate_group, trivial_generators

    return generate_group(TWO_GBITS, trivial_generators(TWO_GBITS))
