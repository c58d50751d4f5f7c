import pytest

from efx_chores import Allocation, Instance, Owner

# Cost table of the running three-agent, six-chore example.
SAMPLE_COSTS = [
    [2, 0, 5, 2, 5, 2],
    [2, 4, 3, 3, 0, 3],
    [1, 1, 1, 1, 1, 1],
]


@pytest.fixture
def sample():
    return Instance.from_rows(SAMPLE_COSTS)


@pytest.fixture
def sample_alloc():
    return Allocation((frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})), Owner.SLOTS)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    def record(name: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
