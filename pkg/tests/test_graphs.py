import math
import random

import pytest

from minklab import graphs as G
from minklab.errors import AcyclicError, DisconnectedGraphError, ParseError, TooLargeError

from helpers import random_connected_graph

THETA = G.MetricGraph(2, ((0, 1, 1.0), (0, 1, 1.0), (0, 1, 1.0)))
TRIANGLE = G.MetricGraph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))
K4 = G.MetricGraph(4, tuple((u, v, 1.0) for u in range(4) for v in range(u + 1, 4)))
SQUARE_DIAG = G.MetricGraph(
    4, ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0), (0, 2, 10.0))
)
TREE = G.MetricGraph(3, ((0, 1, 1.0), (1, 2, 2.0)))
LOOP = G.MetricGraph(1, ((0, 0, 5.0),))


def test_betti1_examples():
    assert G.betti1(TREE) == 0
    assert G.betti1(THETA) == 2
    assert G.betti1(K4) == 3


def test_total_length_examples():
    assert G.total_length(TRIANGLE) == 3.0
    assert G.total_length(THETA) == 3.0
    assert G.total_length(LOOP) == 5.0


def test_construction_rejects_bad_graphs():
    with pytest.raises(DisconnectedGraphError):
        G.MetricGraph(4, ((0, 1, 1.0), (2, 3, 1.0)))
    with pytest.raises(ValueError):
        G.MetricGraph(2, ((0, 1, 0.0),))
    with pytest.raises(ValueError):
        G.MetricGraph(2, ((0, 5, 1.0),))


def test_shortest_cycle_triangle():
    cycle, length = G.shortest_cycle(TRIANGLE)
    assert length == 3.0
    assert cycle == frozenset({0, 1, 2})


def test_shortest_cycle_theta_uses_parallel_pair():
    cycle, length = G.shortest_cycle(THETA)
    assert length == 2.0
    assert cycle == frozenset({0, 1})  # lexicographically smallest pair


def test_shortest_cycle_avoids_heavy_diagonal():
    cycle, length = G.shortest_cycle(SQUARE_DIAG)
    assert length == 4.0
    assert cycle == frozenset({0, 1, 2, 3})


def test_shortest_cycle_self_loop():
    g = G.MetricGraph(2, ((0, 1, 1.0), (1, 1, 0.5)))
    cycle, length = G.shortest_cycle(g)
    assert cycle == frozenset({1})
    assert length == 0.5


def test_shortest_cycle_rejects_trees():
    with pytest.raises(AcyclicError):
        G.shortest_cycle(TREE)


def test_shortest_cycle_agrees_with_enumeration():
    rng = random.Random(17)
    for _ in range(60):
        g = random_connected_graph(rng, max_vertices=6, min_rank=1, max_rank=4,
                                   allow_loops=True)
        if len(g.edges) > 9:
            continue
        _, fast = G.shortest_cycle(g)
        exhaustive = min(length for _, length in G.enumerate_embedded_cycles(g))
        assert fast == pytest.approx(exhaustive, rel=0, abs=0)


def test_greedy_theta():
    cert = G.greedy_homology_basis(THETA)
    assert cert.lengths == (2.0, 2.0)
    assert cert.product == 4.0
    assert cert.bound == pytest.approx(4.0 * math.log2(2) * 9.0)
    assert cert.independence_rank == 2
    assert cert.bound_holds


def test_greedy_k4():
    cert = G.greedy_homology_basis(K4)
    assert cert.lengths == (3.0, 3.0, 3.0)
    assert cert.product == 27.0
    expected_bound = 4.0**2 / 2.0 * math.log2(2) * math.log2(3) * 6.0**3
    assert cert.bound == pytest.approx(expected_bound)
    assert cert.bound_holds


def test_greedy_single_loop_degenerate_bound():
    cert = G.greedy_homology_basis(LOOP)
    assert cert.lengths == (5.0,)
    assert cert.bound == 5.0
    assert cert.product <= cert.bound


def test_greedy_cycles_live_on_original_graph():
    cert = G.greedy_homology_basis(SQUARE_DIAG)
    for cycle in cert.cycles:
        assert G.is_embedded_cycle(SQUARE_DIAG, cycle)
    assert cert.independence_rank == 2


def test_greedy_randomized_certificates_hold():
    rng = random.Random(23)
    for _ in range(80):
        g = random_connected_graph(rng, max_vertices=12, min_rank=1, max_rank=6,
                                   allow_loops=True)
        cert = G.greedy_homology_basis(g)
        b = G.betti1(g)
        assert cert.independence_rank == b
        assert len(cert.cycles) == b
        assert cert.bound_holds
        for cycle in cert.cycles:
            assert G.is_embedded_cycle(g, cycle)


def test_min_cycle_basis_examples():
    assert G.min_cycle_basis(THETA).lengths == (2.0, 2.0)
    assert G.min_cycle_basis(K4).lengths == (3.0, 3.0, 3.0)
    assert G.min_cycle_basis(SQUARE_DIAG).lengths == (4.0, 12.0)


def test_min_cycle_basis_size_limit():
    rng = random.Random(3)
    g = random_connected_graph(rng, max_vertices=6, min_rank=9, max_rank=9)
    with pytest.raises(TooLargeError):
        G.min_cycle_basis(g)


def test_oracle_dominates_greedy():
    rng = random.Random(29)
    for _ in range(60):
        g = random_connected_graph(rng, max_vertices=10, min_rank=1, max_rank=6,
                                   allow_loops=True)
        greedy = G.greedy_homology_basis(g)
        oracle = G.min_cycle_basis(g)
        for o, s in zip(sorted(oracle.lengths), sorted(greedy.lengths)):
            assert o <= s + 1e-9
        assert oracle.product <= greedy.product * (1 + 1e-9)


def test_verify_independence_examples():
    assert G.verify_independence(THETA, [frozenset({0, 1}), frozenset({1, 2})]) == 2
    assert G.verify_independence(THETA, [frozenset({0, 1}), frozenset({0, 1})]) == 1
    assert G.verify_independence(THETA, []) == 0


def test_bst_inequality_on_random_graphs():
    rng = random.Random(31)
    for _ in range(80):
        g = random_connected_graph(rng, max_vertices=14, min_rank=2, max_rank=8)
        _, systole = G.shortest_cycle(g)
        assert systole <= G.bst_bound(g) + 1e-9


def test_text_roundtrip_and_parse_errors():
    g = G.MetricGraph(3, ((0, 1, 1.5), (1, 2, 2.5), (0, 2, 0.25)))
    assert G.MetricGraph.from_text(g.to_text()) == g
    with pytest.raises(ParseError, match="line 1"):
        G.MetricGraph.from_text("bad\n")
    with pytest.raises(ParseError, match="line 2"):
        G.MetricGraph.from_text("2 1\n0 1\n")
    with pytest.raises(ParseError):
        G.MetricGraph.from_text("2 2\n0 1 1.0\n")
