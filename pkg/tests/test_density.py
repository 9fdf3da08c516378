import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evencycle.density import (
    SOURCE_EXTERNAL,
    SOURCE_INTERNAL,
    BipartiteH,
    CoreGraph,
    build_H,
    burr_crossing,
    c4_local_density_witness,
    compute_in_out,
    density_certificate,
    density_extract,
    extract_cycle_from_core,
    find_violation,
    max_cut_bipartition,
    peel,
    reconstruct_path,
    tau,
)
from evencycle.errors import InvariantViolation, PreconditionError
from evencycle.graph import Graph, verify_cycle
from lab.generators import gen_complete_bipartite, gen_dense, gen_random, gen_tree


def test_tau():
    assert tau(2, 1) == 24
    assert tau(3, 2) == 216


@settings(max_examples=100, deadline=None)
@given(edges=st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)).filter(lambda e: e[0] != e[1]), unique_by=lambda e: frozenset(e)))
def test_greedy_cut_keeps_half_the_edges(edges):
    sides = max_cut_bipartition(edges)
    crossing = burr_crossing(edges, sides)
    assert 2 * len(crossing) >= len(edges)
    assert all(sides[a] != sides[b] for a, b in crossing)


def test_four_cycle_from_neighbourhood_density():
    g = gen_complete_bipartite(5, 5)
    w = c4_local_density_witness(g, 0)
    assert verify_cycle(g, w, 4)
    assert w[0] == 0
    with pytest.raises(PreconditionError):
        c4_local_density_witness(gen_tree(10, 0), 0)


def test_build_H_on_a_dense_instance():
    g = gen_dense(2, seed=0)
    h = build_H(g, 0, 1)
    assert h.X <= h.reach and not h.X & h.Y
    assert 6 * len(h.edges) > tau(2, 1) * g.n
    assert all(x in h.X and y in h.Y and g.has_edge(x, y) for x, y in h.edges)


def test_build_H_uses_external_edges_on_a_star():
    # R_1(0) = leaves, no edges inside it
    g = Graph.from_edges(7, [(0, i) for i in range(1, 4)] + [(i, i + 3) for i in range(1, 4)])
    h = build_H(g, 0, 1)
    assert h.source_kind == SOURCE_EXTERNAL
    assert h.X == {1, 2, 3}
    assert h.Y == {0, 4, 5, 6}


def test_peel():
    k22 = [(0, 2), (0, 3), (1, 2), (1, 3)]
    core, removed = peel(k22, 2)
    assert core.edges == frozenset(k22) and not removed
    core, removed = peel(k22, 3)
    assert not core
    assert set(removed) == {2, 3}


def test_peel_hands_low_degree_y_edges_to_out():
    edges = [(x, y) for x in range(3) for y in (10, 11, 12)] + [(0, 20), (1, 20)]
    core, removed = peel(edges, 3)
    assert core.y_nodes == {10, 11, 12}
    assert removed == {20: frozenset({(0, 20), (1, 20)})}
    assert all(core.degree(w) >= 3 for w in core.x_nodes | core.y_nodes)


@pytest.mark.parametrize("seed", range(4))
def test_density_extract_k2(seed):
    g = gen_dense(2, seed)
    found = find_violation(g, 2)
    assert found == (0, 1)
    assert verify_cycle(g, density_extract(g, 2, 1, 0), 4)


def test_density_certificate_k3():
    g = gen_dense(3, seed=1)
    cert = density_certificate(g, 3, 1, 0)
    assert verify_cycle(g, cert.witness, 6)
    assert (cert.level, cert.node) in cert.table.cores


def test_provenance_paths_and_core_extraction():
    g = gen_dense(2, seed=2)
    cert = density_certificate(g, 2, 1, 0)
    table = cert.table
    core = table.cores[(cert.level, cert.node)]
    for e in sorted(core.edges)[:5]:
        p = reconstruct_path(table, e, cert.level, cert.node)
        assert p[0] == e[0] and p[-1] == cert.node
        if cert.level == 1:
            assert table.predecessor(1, cert.node, e) == e[0]
    assert verify_cycle(g, extract_cycle_from_core(table, core, 2), 4)


def test_in_slices_match_out_of_feeders():
    g = gen_dense(2, seed=3)
    table = density_certificate(g, 2, 1, 0).table
    for u, incoming in table.in_sets[1].items():
        feeders = table.feeders[1][u]
        assert incoming == frozenset().union(*(table.out_edges(0, w) for w in feeders))
        assert table.out_edges(1, u) <= incoming


def _relay_gadget():
    """40 X nodes joined to 4 Y nodes, 8 relays over disjoint groups of 5 X nodes, one sink over the relays."""
    xs, ys, relays, sink = range(40), range(40, 44), range(44, 52), 52
    hub = [(x, y) for x in xs for y in ys]
    spokes = [(x, r) for r in relays for x in range(5 * (r - 44), 5 * (r - 44) + 5)]
    g = Graph.from_edges(53, hub + spokes + [(r, sink) for r in relays])
    h = BipartiteH(frozenset(xs), frozenset(ys), frozenset(hub), SOURCE_INTERNAL)
    return g, h, compute_in_out(g, h, 2, 3)


def test_level_two_core_closes_a_six_cycle():
    g, _, table = _relay_gadget()
    assert sorted(table.cores) == [(1, 40), (1, 41), (1, 42), (1, 43), (2, 52)]
    core = table.cores[(2, 52)]
    e = min(core.edges)
    assert e == (0, 40)
    assert reconstruct_path(table, e, 2, 52) == (0, 44, 52)
    assert e in table.out_edges(0, 0) & table.out_edges(1, 44)
    cycle = extract_cycle_from_core(table, core, 3)
    assert cycle == (52, 44, 0, 40, 5, 45)
    assert verify_cycle(g, cycle, 6)


def test_out_sets_sit_inside_the_next_level_in_sets():
    _, _, table = _relay_gadget()
    for i in (1, 2):
        assert table.feeders[i]
        for u, ws in table.feeders[i].items():
            assert table.out_edges(i, u) <= table.in_edges(i, u)
            for w in ws:
                assert table.out_edges(i - 1, w) <= table.in_edges(i, u)


def test_stuck_core_walk_is_reported():
    _, _, table = _relay_gadget()
    thin = CoreGraph(2, 52, frozenset({0}), frozenset({40}), frozenset({(0, 40)}))
    with pytest.raises(InvariantViolation, match="stuck"):
        extract_cycle_from_core(table, thin, 4)


def test_reconstruct_path_requires_membership():
    g = gen_dense(2, seed=0)
    table = density_certificate(g, 2, 1, 0).table
    with pytest.raises(PreconditionError):
        reconstruct_path(table, (-1, -2), 1, 0)


def test_density_preconditions():
    tree = gen_tree(20, 0)
    assert find_violation(tree, 2) is None
    assert find_violation(gen_random(30, 40, 0), 3) is None
    with pytest.raises(PreconditionError):
        density_extract(tree, 2, 1, 0)
    with pytest.raises(PreconditionError):
        density_extract(tree, 2, 2, 0)
    with pytest.raises(PreconditionError):
        density_extract(tree, 2, 1, 99)


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3])
def test_density_acceptance(k):
    for seed in range(100):
        g = gen_dense(k, seed)
        v, ell = find_violation(g, k)
        assert verify_cycle(g, density_extract(g, k, ell, v), 2 * k)


@pytest.mark.slow
def test_greedy_cut_acceptance():
    for seed in range(1000):
        g = gen_random(40, 120, seed)
        edges = g.sorted_edges()
        assert 2 * len(burr_crossing(edges, max_cut_bipartition(edges))) >= len(edges)
