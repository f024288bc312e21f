import pytest

from fairdamp.fixtures import example_graph
from fairdamp.structure import decompose

from graphgen import graph_corpus

ACCEPTANCE_LOG = []


@pytest.fixture(scope="session")
def fixture_graph():
    return example_graph()


@pytest.fixture(scope="session")
def fixture_dec(fixture_graph):
    return decompose(fixture_graph)


@pytest.fixture(scope="session")
def corpus():
    return graph_corpus(seed=20240601, count=60)


@pytest.fixture(scope="session")
def oracle_corpus():
    """Graphs shared by the acceptance criteria (n <= 100)."""
    return graph_corpus(seed=1729, count=240)


def record(number, title, ok, detail=""):
    """Log one acceptance line; it is printed again in the terminal summary."""
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LOG.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
