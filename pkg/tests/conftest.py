import networkx as nx
import pytest
from hypothesis import strategies as st

from evencycle.graph import Graph


def from_networkx(nxg):
    nxg = nx.convert_node_labels_to_integers(nxg, ordering="sorted")
    return Graph.from_edges(nxg.number_of_nodes(), nxg.edges())


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, edges)


@pytest.fixture
def petersen():
    return from_networkx(nx.petersen_graph())


@pytest.fixture
def k22():
    return Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


@pytest.fixture
def k33():
    return Graph.from_edges(6, [(i, 3 + j) for i in range(3) for j in range(3)])


@pytest.fixture
def path4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def c6():
    return Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
