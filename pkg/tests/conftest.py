import pytest
from hypothesis import HealthCheck, settings

from qse.condlang import parse_program
from qse.partition import run_and_extract, simulate
from qse.qsynth import compile_qse

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIG1 = """
var x:3;
var y:2;
if (x + y < 4) {
    if (x > y) { A } else { B }
} else {
    if (y > 1) { C } else { D }
}
"""

# the four subsets of the worked example, (x, y) pairs
FIG1_SUBSETS = {
    "A": {(1, 0), (2, 0), (3, 0), (2, 1)},
    "B": {(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2)},
    "C": {(1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3),
          (5, 2), (5, 3), (6, 2), (6, 3), (7, 2), (7, 3)},
    "D": {(3, 1), (4, 0), (4, 1), (5, 0), (5, 1), (6, 0), (6, 1), (7, 0), (7, 1)},
}
FIG1_PATTERNS = {"A": "1001", "B": "0*01", "C": "10*0", "D": "0**0"}


@pytest.fixture(scope="session")
def fig1_tree():
    return parse_program(FIG1)


@pytest.fixture(scope="session")
def fig1_circuit(fig1_tree):
    return compile_qse(fig1_tree)


@pytest.fixture(scope="session")
def fig1_state(fig1_circuit):
    return simulate(fig1_circuit)


@pytest.fixture(scope="session")
def fig1_partition(fig1_circuit, fig1_state):
    return run_and_extract(fig1_circuit, fig1_state)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
