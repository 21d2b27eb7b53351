import numpy as np
import pytest

from lapsep import TensorShape, WeightedGraph, laplacian_density


@pytest.fixture
def e1():
    """Laplacian density of the single entangled edge (1,1)-(2,2) on the 2 x 2 grid."""
    return laplacian_density(WeightedGraph.from_edges(2, 2, [((1, 1), (2, 2), 1.0)]))


@pytest.fixture
def e2():
    """Two vertical edges (1,1)-(2,1) and (1,2)-(2,2)."""
    return laplacian_density(WeightedGraph.from_edges(2, 2, [((1, 1), (2, 1), 1.0), ((1, 2), (2, 2), 1.0)]))


@pytest.fixture
def shape22():
    return TensorShape(2, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
