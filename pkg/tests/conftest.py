import pytest

from unitred import SubsetSumInstance, ThreeSatInstance

EXAMPLE_CNF = "p cnf 5 4\n1 2 -3 0\n1 -3 4 0\n-1 4 5 0\n2 -3 -4 0\n"

# every sign pattern of (x1 or x2 or x3): unsatisfiable
ALL_SIGNS = ThreeSatInstance.from_ints(
    3,
    [
        [s1 * 1, s2 * 2, s3 * 3]
        for s1 in (1, -1)
        for s2 in (1, -1)
        for s3 in (1, -1)
    ],
)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def example_subset_sum():
    return SubsetSumInstance((1, 2, -3, -4), -2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
