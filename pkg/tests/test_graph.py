import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evencycle.errors import CapExceeded, GraphError, PreconditionError
from evencycle.graph import (
    Graph,
    enumerate_simple_paths,
    find_cycle_bruteforce,
    floor_root,
    format_edge_list,
    has_cycle_exhaustive,
    is_heavy,
    iter_simple_paths,
    light_graph,
    local_density,
    parse_edge_list,
    reach_exact,
    read_edge_list,
    verify_cycle,
)
from tests.conftest import graphs


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 0)],
        [(0, 1), (1, 0)],
        [(0, 5)],
        [(-1, 2)],
    ],
)
def test_from_edges_rejects_bad_input(edges):
    with pytest.raises(GraphError):
        Graph.from_edges(4, edges)


def test_adjacency_is_sorted():
    g = Graph.from_edges(4, [(0, 3), (0, 1), (2, 0)])
    assert g.neighbors(0) == (1, 2, 3)
    assert g.degree(0) == 3
    assert g.m == 3
    assert g.has_edge(3, 0) and not g.has_edge(1, 2)


def test_edge_list_parse_and_format():
    text = "# a square\n4 4\n0 1\n1 2\n\n2 3  # last side\n0 3\n"
    g = parse_edge_list(text)
    assert g.n == 4 and g.m == 4
    assert format_edge_list(g) == "4 4\n0 1\n0 3\n1 2\n2 3\n"


@pytest.mark.parametrize("text", ["", "4\n", "3 2\n0 1\n", "3 1\n0 1 2\n", "3 1\n0 x\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_read_missing_file(tmp_path):
    with pytest.raises(GraphError):
        read_edge_list(tmp_path / "nope.txt")


def test_simple_paths_on_a_path(path4):
    assert enumerate_simple_paths(path4, 0, 3) == [(0, 1, 2, 3)]
    assert enumerate_simple_paths(path4, 1, 2) == [(1, 2, 3)]
    assert enumerate_simple_paths(path4, 2, 0) == [(2,)]


def test_simple_paths_guards(path4):
    with pytest.raises(CapExceeded):
        list(iter_simple_paths(path4, 0, 7))
    with pytest.raises(PreconditionError):
        list(iter_simple_paths(path4, 0, -1))
    assert list(iter_simple_paths(path4, 0, 2, avoid=(1,))) == []


def test_reach_exact_on_hexagon(c6):
    assert reach_exact(c6, 0, 2) == {2, 4}
    assert reach_exact(c6, 0, 3) == {3}
    assert local_density(c6, 0, 2) == 4


@settings(max_examples=80, deadline=None)
@given(g=graphs(min_n=2, max_n=8), length=st.integers(min_value=1, max_value=4))
def test_simple_paths_match_networkx(g, length):
    nxg = g.to_networkx()
    expected = {
        tuple(p)
        for t in range(g.n)
        if t != 0
        for p in nx.all_simple_paths(nxg, 0, t, cutoff=length)
        if len(p) == length + 1
    }
    assert set(enumerate_simple_paths(g, 0, length)) == expected


@given(x=st.integers(min_value=0, max_value=10**30), k=st.integers(min_value=1, max_value=6))
def test_floor_root(x, k):
    r = floor_root(x, k)
    assert r**k <= x < (r + 1) ** k


def test_light_graph_drops_the_star_centre():
    star = Graph.from_edges(9, [(0, i) for i in range(1, 9)])
    assert is_heavy(star.degree(0), 9, 2)
    assert light_graph(star, 2).m == 0


def test_petersen_cycle_lengths(petersen):
    assert find_cycle_bruteforce(petersen, 4) is None
    six = find_cycle_bruteforce(petersen, 6)
    eight = find_cycle_bruteforce(petersen, 8)
    assert verify_cycle(petersen, six, 6)
    assert verify_cycle(petersen, eight, 8)
    # not Hamiltonian
    assert find_cycle_bruteforce(petersen, 10) is None


def test_bruteforce_returns_least_witness(k22):
    assert find_cycle_bruteforce(k22, 4) == (0, 2, 1, 3)


def test_oracle_guards(k22):
    with pytest.raises(CapExceeded):
        find_cycle_bruteforce(k22, 4, max_n=3)
    with pytest.raises(CapExceeded):
        has_cycle_exhaustive(k22, 4, max_n=3)
    with pytest.raises(PreconditionError):
        find_cycle_bruteforce(k22, 5)
    with pytest.raises(PreconditionError):
        find_cycle_bruteforce(k22, 14)


@settings(max_examples=80, deadline=None)
@given(g=graphs(min_n=4, max_n=8), twok=st.sampled_from([4, 6]))
def test_oracles_agree(g, twok):
    found = find_cycle_bruteforce(g, twok)
    nx_found = any(len(c) == twok for c in nx.simple_cycles(g.to_networkx(), length_bound=twok))
    assert (found is not None) == has_cycle_exhaustive(g, twok) == nx_found
    if found is not None:
        assert verify_cycle(g, found, twok)
        assert found[0] == min(found)


def test_verify_cycle_rejects(k22):
    assert verify_cycle(k22, (0, 2, 1, 3), 4)
    assert not verify_cycle(k22, (0, 2, 1, 3), 6)
    assert not verify_cycle(k22, (0, 2, 0, 3), 4)
    assert not verify_cycle(k22, (0, 1, 2, 3), 4)
    assert not verify_cycle(k22, (0, 2, 1, 9), 4)
    assert not verify_cycle(k22, ("a", 2, 1, 3), 4)
