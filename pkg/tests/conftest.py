import json
import random

import pytest

from breakdiv.fixtures import path3, random_graph, theta, theta_unit, triangle
from breakdiv.graph import graph_to_json


@pytest.fixture
def th():
    return theta()


@pytest.fixture
def thu():
    return theta_unit()


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def p3():
    return path3()


@pytest.fixture
def small_graphs():
    """A fixed sample of random graphs small enough for 2^|E| searches."""
    rng = random.Random(20261016)
    return [random_graph(rng, max_vertices=5, max_edges=7, max_length=5) for _ in range(25)]


@pytest.fixture
def graph_file(tmp_path):
    def write(g, name="g.json"):
        path = tmp_path / name
        path.write_text(json.dumps(graph_to_json(g)), encoding="utf-8")
        return str(path)

    return write


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
