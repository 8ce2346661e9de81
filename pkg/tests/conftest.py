from pathlib import Path

import pytest

from expord.experiments import experiment

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

E1_ROWS = [["3/5", "2/5"], ["2/5", "3/5"]]
E2_ROWS = [["1/2", "2/5", "1/10"], ["1/10", "2/5", "1/2"]]
E3_ROWS = [["1/2", "3/10", "1/10", "1/10"], ["1/10", "1/10", "3/10", "1/2"]]
G_ROWS = [["1", "1/2", "0", "0"], ["0", "1/8", "1/8", "0"], ["0", "0", "1/2", "1"]]


@pytest.fixture
def E1():
    return experiment(E1_ROWS)


@pytest.fixture
def E2():
    return experiment(E2_ROWS)


@pytest.fixture
def E3():
    return experiment(E3_ROWS)


@pytest.fixture
def identity2():
    return experiment([[1, 0], [0, 1]])


@pytest.fixture
def flat2():
    return experiment([["1/2", "1/2"], ["1/2", "1/2"]])


# acceptance criteria report, filled in by tests/test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.split(".")[0].rstrip("abcdefgh")), k)):
        ok, title, detail = ACCEPTANCE_RESULTS[key]
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
