import math

import numpy as np
import pytest

from conftest import all_edge_subsets, brute_deficiency, random_edge_subset
from depspan.graphs import RankGraph, complete_graph, filter_edges, interval_graph
from depspan.reach import (DeficiencyReport, deficiency,
                           expected_two_hop_deficiency, khop_deficiency,
                           khop_deficiency_split, monte_carlo_deficiency,
                           no_two_hop_probability, straight_hops,
                           straight_reachable, _khop_bits, _khop_matmul)
from depspan.rng import derive_stream


def test_straight_reachable_hand_traces():
    g = RankGraph.from_edges(4, [(1, 2), (2, 4)])
    r = straight_reachable(g, 1)
    assert (r[2], r[3], r[4]) == (True, False, True)

    g = RankGraph.from_edges(4, [(1, 2), (3, 4)])
    r = straight_reachable(g, 1)
    assert (r[2], r[3], r[4]) == (True, False, False)

    k = complete_graph(6)
    for i in range(1, 7):
        r = straight_reachable(k, i)
        assert all(r[j] for j in range(i + 1, 7))


def test_straight_reachable_rejects_bad_vertex():
    g = complete_graph(4)
    for v in (0, 5):
        with pytest.raises(ValueError):
            straight_reachable(g, v)


def test_straight_hops_hand_traces():
    k = complete_graph(5)
    h = straight_hops(k, 1)
    assert all(h[j] == 1 for j in range(2, 6))

    path = interval_graph(6, 1)
    h = straight_hops(path, 1)
    assert all(h[j] == j - 1 for j in range(2, 7))

    g = RankGraph.from_edges(6, [(1, 3), (3, 6), (1, 6)])
    h = straight_hops(g, 1)
    assert h[3] == 1 and h[6] == 1
    assert math.isinf(h[2]) and math.isinf(h[4]) and math.isinf(h[5])


def test_reachable_iff_finite_hops(np_rng):
    for _ in range(25):
        edges = random_edge_subset(7, np_rng)
        g = RankGraph.from_edges(7, sorted(edges))
        for i in range(1, 8):
            r = straight_reachable(g, i)
            h = straight_hops(g, i)
            for j in range(i + 1, 8):
                assert r[j] == (h[j] < np.inf)


def test_deficiency_examples():
    assert deficiency(complete_graph(9)) == 0
    assert deficiency(RankGraph.from_edges(5, [])) == 10
    assert deficiency(RankGraph.from_edges(3, [(1, 3)])) == 2


def test_deficiency_equals_per_source_counts(np_rng):
    for _ in range(10):
        edges = random_edge_subset(7, np_rng)
        g = RankGraph.from_edges(7, sorted(edges))
        per_source = sum((g.n - i) - int(straight_reachable(g, i)[i + 1:].sum())
                         for i in range(1, g.n + 1))
        assert deficiency(g) == per_source


def test_khop_examples():
    assert khop_deficiency(complete_graph(8), 1) == 0
    path4 = interval_graph(4, 1)
    assert khop_deficiency(path4, 1) == 3
    assert khop_deficiency(path4, 3) == 0
    with pytest.raises(ValueError):
        khop_deficiency(path4, 0)


def test_khop_matches_brute_force_exhaustive_n4():
    for edges in all_edge_subsets(4):
        g = RankGraph.from_edges(4, sorted(edges))
        assert deficiency(g) == brute_deficiency(4, edges)
        for k in (1, 2, 3):
            assert khop_deficiency(g, k) == brute_deficiency(4, edges, k)


def test_khop_engines_agree_with_brute_force_sampled(np_rng):
    for n in (6, 7):
        for _ in range(40):
            edges = random_edge_subset(n, np_rng)
            g = RankGraph.from_edges(n, sorted(edges))
            assert deficiency(g) == brute_deficiency(n, edges)
            for k in (1, 2, 4):
                expected = brute_deficiency(n, edges, k)
                assert khop_deficiency(g, k) == expected
                order = np.argsort(g.edge_j, kind="stable")
                bits_total, _ = _khop_bits(n, g.edge_i[order], g.edge_j[order],
                                           k, None)
                mm_total, _ = _khop_matmul(n, g.edge_i, g.edge_j, k, None)
                assert bits_total == mm_total == expected


def test_khop_split_engines_agree(np_rng):
    g = filter_edges(interval_graph(60, 9), 0.5, derive_stream(5, 0))
    for k in (2, 4):
        for radius in (5, 9, 20):
            short, long_ = khop_deficiency_split(g, k, radius)
            order = np.argsort(g.edge_j, kind="stable")
            bt, bl = _khop_bits(g.n, g.edge_i[order], g.edge_j[order], k, radius)
            assert (short + long_, long_) == (bt, bl)
            assert short + long_ == khop_deficiency(g, k)
            brute_long = sum(
                1 for i in range(1, g.n + 1) for j in range(i + 1, g.n + 1)
                if j - i > radius and straight_hops(g, i)[j] > k)
            assert long_ == brute_long


def test_khop_monotone_in_k_and_matches_unbounded(np_rng):
    for _ in range(10):
        edges = random_edge_subset(7, np_rng)
        g = RankGraph.from_edges(7, sorted(edges))
        prev = None
        for k in range(1, 8):
            cur = khop_deficiency(g, k)
            if prev is not None:
                assert cur <= prev
            prev = cur
        assert khop_deficiency(g, g.n - 1) == deficiency(g)


def test_adding_edges_never_hurts(np_rng):
    for _ in range(15):
        edges = random_edge_subset(6, np_rng)
        g = RankGraph.from_edges(6, sorted(edges))
        missing = [(i, j) for i in range(1, 7) for j in range(i + 1, 7)
                   if (i, j) not in edges]
        if not missing:
            continue
        extra = missing[np_rng.integers(0, len(missing))]
        g2 = RankGraph.from_edges(6, sorted(edges | {extra}))
        assert deficiency(g2) <= deficiency(g)
        assert khop_deficiency(g2, 2) <= khop_deficiency(g, 2)


def test_no_two_hop_probability_values():
    assert no_two_hop_probability(1, 0.5) == 0.5
    assert no_two_hop_probability(2, 0.5) == pytest.approx(0.375)
    assert no_two_hop_probability(17, 1.0) == 0.0
    with pytest.raises(ValueError):
        no_two_hop_probability(0, 0.5)


def test_no_two_hop_probability_sandwich():
    psis = np.linspace(0.05, 0.95, 19)
    for delta in range(1, 65):
        for psi in psis:
            p = no_two_hop_probability(delta, float(psi))
            assert (1 - psi) ** delta <= p + 1e-15
            assert p == pytest.approx((1 - psi) * (1 - psi * psi) ** (delta - 1))


def test_expected_two_hop_deficiency_values():
    assert expected_two_hop_deficiency(2, 0.5) == pytest.approx(0.5)
    assert expected_two_hop_deficiency(3, 0.5) == pytest.approx(1.375)
    assert expected_two_hop_deficiency(100, 1.0) == 0.0
    for n in (10, 100, 317):
        for psi in (0.1, 0.3, 0.7):
            assert expected_two_hop_deficiency(n, psi) <= n / psi ** 2


def test_monte_carlo_certain_cases():
    rep = monte_carlo_deficiency(complete_graph(12), 1.0, 5, master=3)
    assert rep.mean_failed_pairs == 0.0 and rep.stderr == 0.0
    rep = monte_carlo_deficiency(complete_graph(10), 0.0, 4, master=3)
    assert rep.mean_failed_pairs == 45.0 and rep.stderr == 0.0


def test_monte_carlo_matches_filter_edges_coupling():
    g = interval_graph(40, 6)
    psi, master = 0.6, 91
    rep = monte_carlo_deficiency(g, psi, 6, master=master)
    expected = [deficiency(filter_edges(g, psi, derive_stream(master, t)))
                for t in range(6)]
    assert list(rep.per_trial_counts) == expected


def test_monte_carlo_deterministic_and_thread_invariant():
    g = complete_graph(60)
    a = monte_carlo_deficiency(g, 0.4, 8, hop_bound=2, master=17, jobs=1)
    b = monte_carlo_deficiency(g, 0.4, 8, hop_bound=2, master=17, jobs=3)
    assert a == b


def test_monte_carlo_source_sampling_runs():
    g = complete_graph(64)
    full = monte_carlo_deficiency(g, 0.3, 4, master=5)
    sampled = monte_carlo_deficiency(g, 0.3, 4, master=5, source_sample=16)
    assert sampled.trials == 4
    # unbiased estimator, loose sanity band only
    assert 0 <= sampled.mean_failed_pairs <= g.n * (g.n - 1) / 2 * 2


def test_monte_carlo_validation():
    g = complete_graph(5)
    with pytest.raises(ValueError):
        monte_carlo_deficiency(g, 0.5, 0)
    with pytest.raises(ValueError):
        monte_carlo_deficiency(g, 0.5, 3, hop_bound=0)
    with pytest.raises(ValueError):
        monte_carlo_deficiency(g, 1.5, 3)


def test_report_invariants_and_csv():
    rep = DeficiencyReport.from_counts(10, 0.5, None, 7, [3, 5, 4, 4])
    assert rep.mean_failed_pairs == pytest.approx(4.0)
    assert rep.stderr == pytest.approx(np.std([3, 5, 4, 4], ddof=1) / 2.0)
    assert all(0 <= c <= 45 for c in rep.per_trial_counts)
    row = rep.csv_row()
    assert row.startswith("10,0.5,inf,4,4,")
    rep2 = DeficiencyReport.from_counts(10, 0.5, 2, 7, [3])
    assert rep2.stderr == 0.0
    assert ",2," in rep2.csv_row()
