import pytest

from varevasive.field import make_field

ACCEPTANCE_LINES: list[str] = []

# every field with q <= 81
SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4),
                (17, 1), (19, 1), (23, 1), (5, 2), (3, 3), (29, 1), (31, 1), (2, 5), (37, 1),
                (41, 1), (43, 1), (47, 1), (7, 2), (53, 1), (59, 1), (61, 1), (2, 6), (67, 1),
                (71, 1), (73, 1), (79, 1), (3, 4)]


@pytest.fixture(scope="session")
def F7():
    return make_field(7)


@pytest.fixture(scope="session")
def F11():
    return make_field(11)


@pytest.fixture(scope="session")
def F9():
    return make_field(3, 2)


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"{name} {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
