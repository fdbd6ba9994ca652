from fractions import Fraction

import pytest

from cxcdyn.gdms import build_interval_system
from cxcdyn.graphs import make_graph


@pytest.fixture(scope="session")
def two_loops():
    """One vertex, two self-loops of degree 2."""
    return make_graph(1, [(1, 1, 2), (1, 1, 2)])


@pytest.fixture(scope="session")
def two_loops_d4():
    return make_graph(1, [(1, 1, 4), (1, 1, 4)])


@pytest.fixture(scope="session")
def alternating():
    """Two vertices joined by single edges both ways (fails the cycle test)."""
    return make_graph(2, [(1, 2, 4), (2, 1, 4)])


@pytest.fixture(scope="session")
def standard_system(two_loops):
    """The two-loop system at snowflake parameter 1/2: subintervals of
    length 1/4 with gaps 1/6, expansion ratio 4 on each branch."""
    return build_interval_system(two_loops, 0.5)


@pytest.fixture(scope="session")
def eighth():
    return Fraction(1, 8)
