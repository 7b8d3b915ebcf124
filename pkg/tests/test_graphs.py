import numpy as np
import pytest

from depspan.graphs import (RankGraph, complete_graph, filter_edges,
                            graph_union, interval_graph)
from depspan.rng import derive_stream


@pytest.mark.parametrize("n,expected", [(1, 0), (4, 6), (10, 45)])
def test_complete_graph_sizes(n, expected):
    assert complete_graph(n).m == expected


def test_complete_graph_rejects_zero():
    with pytest.raises(ValueError):
        complete_graph(0)


@pytest.mark.parametrize("n,radius,expected", [
    (10, 3, 24),   # 9 + 8 + 7
    (5, 0, 0),
    (5, 4, 10),    # equals K_5
    (5, 99, 10),   # radius clamps at n-1
])
def test_interval_graph_sizes(n, radius, expected):
    g = interval_graph(n, radius)
    assert g.m == expected
    for i, j in zip(g.edge_i, g.edge_j):
        assert 0 < j - i <= max(radius, 0) or radius >= n - 1


def test_interval_graph_rejects_negative_radius():
    with pytest.raises(ValueError):
        interval_graph(5, -1)


def test_edges_canonicalized():
    g = RankGraph.from_edges(5, [(4, 2), (1, 3), (2, 5)])
    assert g.edge_set() == {(2, 4), (1, 3), (2, 5)}
    assert list(g.edge_i) == sorted(g.edge_i)


@pytest.mark.parametrize("edges,err", [
    ([(1, 1)], "self-loop"),
    ([(0, 2)], "out of range"),
    ([(2, 6)], "out of range"),
    ([(1, 2), (2, 1)], "duplicate"),
])
def test_bad_edges_rejected(edges, err):
    with pytest.raises(ValueError, match=err):
        RankGraph.from_edges(5, edges)


def test_weight_table_must_match_edges():
    with pytest.raises(ValueError):
        RankGraph.from_edges(3, [(1, 2)], weights=[1.0, 2.0])
    with pytest.raises(ValueError):
        RankGraph.from_edges(3, [(1, 2)], weights=[0.0])


def test_graphs_are_immutable():
    g = complete_graph(4)
    with pytest.raises(ValueError):
        g.edge_i[0] = 3


def test_filter_certain_survival_and_failure():
    g = complete_graph(20)
    kept = filter_edges(g, 1.0, derive_stream(4, 0))
    assert kept == g
    none = filter_edges(g, 0.0, derive_stream(4, 0))
    assert none.m == 0 and none.n == 20


def test_filter_rejects_bad_probability():
    g = complete_graph(4)
    for psi in (-0.1, 1.1):
        with pytest.raises(ValueError):
            filter_edges(g, psi, derive_stream(0, 0))


def test_filter_is_subgraph_and_deterministic():
    g = interval_graph(50, 7)
    a = filter_edges(g, 0.4, derive_stream(11, 2))
    b = filter_edges(g, 0.4, derive_stream(11, 2))
    assert a == b
    assert a.edge_set() <= g.edge_set()


def test_filter_binomial_mean():
    # mean kept edges over trials within 4 * sqrt(psi (1-psi) m / T)
    g = complete_graph(100)
    psi, trials = 0.5, 1000
    kept = [filter_edges(g, psi, derive_stream(77, t)).m for t in range(trials)]
    mean = np.mean(kept)
    tol = 4.0 * np.sqrt(psi * (1 - psi) * g.m / trials)
    assert abs(mean - psi * g.m) <= tol


def test_filter_preserves_weights():
    w = np.array([1.0, 2.0, 3.0])
    g = RankGraph.from_edges(4, [(1, 2), (2, 3), (3, 4)], weights=w)
    h = filter_edges(g, 0.5, derive_stream(3, 0))
    expect = g.edge_weight_map()
    assert all(expect[e] == wt for e, wt in h.edge_weight_map().items())


def test_union_identity_and_idempotence():
    g = interval_graph(8, 2)
    empty = RankGraph.from_edges(8, [])
    assert graph_union(g, empty) == g
    assert graph_union(g, g) == g


def test_union_example():
    path = RankGraph.from_edges(3, [(1, 2), (2, 3)])
    chord = RankGraph.from_edges(3, [(1, 3)])
    u = graph_union(path, chord)
    assert u.edge_set() == {(1, 2), (2, 3), (1, 3)}


def test_union_rejects_mismatched_n():
    with pytest.raises(ValueError):
        graph_union(complete_graph(3), complete_graph(4))


def test_union_commutative_associative(np_rng):
    def random_graph():
        edges = [(i, j) for i in range(1, 9) for j in range(i + 1, 9)
                 if np_rng.random() < 0.3]
        return RankGraph.from_edges(8, edges)

    for _ in range(20):
        a, b, c = random_graph(), random_graph(), random_graph()
        assert graph_union(a, b) == graph_union(b, a)
        assert graph_union(graph_union(a, b), c) == graph_union(a, graph_union(b, c))


def test_union_weighted():
    a = RankGraph.from_edges(4, [(1, 2), (1, 3)], weights=[1.0, 2.0])
    b = RankGraph.from_edges(4, [(1, 3), (3, 4)], weights=[2.0, 5.0])
    u = graph_union(a, b)
    assert u.edge_weight_map() == {(1, 2): 1.0, (1, 3): 2.0, (3, 4): 5.0}
    bad = RankGraph.from_edges(4, [(1, 3)], weights=[9.0])
    with pytest.raises(ValueError, match="disagree"):
        graph_union(a, bad)
    unweighted = RankGraph.from_edges(4, [(2, 3)])
    with pytest.raises(ValueError):
        graph_union(a, unweighted)
