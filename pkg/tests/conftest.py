import sys

import pytest

from hittingtime import from_edge_list

from helpers import FIG1_EDGES, K3_EDGES


@pytest.fixture
def fig1():
    return from_edge_list(FIG1_EDGES)


@pytest.fixture
def k3():
    return from_edge_list(K3_EDGES)


@pytest.fixture
def k2():
    return from_edge_list([(0, 1)])



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
