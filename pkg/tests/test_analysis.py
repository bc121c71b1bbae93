from fractions import Fraction

import numpy as np
import pytest

from hittingtime import (
    SortedCurve,
    clique_plus_pendant,
    detect_split,
    from_edge_list,
    hitting_table,
    moments,
    pairwise_distances,
    planted_labels,
    planted_two_community,
    reduce,
    simulate,
    sorted_curve,
)
from hittingtime.errors import TooFewNodes

from helpers import complete_graph, cycle_graph
from oracles import exact_moments


def test_curve_fig1(fig1):
    c = sorted_curve(fig1, 3)
    assert [v for v, _ in c.entries] == [4, 2, 0, 1]
    np.testing.assert_allclose(c.means, [1, 7, 9, 9], atol=1e-10)


def test_curve_k3(k3):
    c = sorted_curve(k3, 2)
    assert c.nodes == [0, 1]
    np.testing.assert_allclose(c.means, [2, 2], atol=1e-12)


def test_curve_k2(k2):
    assert sorted_curve(k2, 1).entries == ((0, 1.0),)


def test_curve_is_sorted_and_complete():
    g = planted_two_community(20, 0.4, 0.05, seed=5)
    c = sorted_curve(g, 3)
    assert sorted(c.nodes) == [v for v in range(40) if v != 3]
    assert (np.diff(c.means) >= 0).all()


def test_hitting_table_adherents(fig1):
    t = hitting_table(fig1, 3)
    assert t.nodes == (0, 1, 2, 4)
    assert t.mean_of(4) == 1.0
    assert t.variance[3] == 0.0


def _curve(means):
    return SortedCurve(0, tuple((k + 1, float(m)) for k, m in enumerate(means)))


def test_split_constructed():
    s = detect_split(_curve([1, 1, 1, 9, 9, 9]), 2)
    assert s.boundary_index == 3
    assert s.gap_size == 8
    assert s.groups == (frozenset({1, 2, 3}), frozenset({4, 5, 6}))


def test_split_min_group_guard():
    # widest gap is after the first entry, but min_group forbids it
    s = detect_split(_curve([1, 20, 21, 22, 30, 31]), 2)
    assert s.boundary_index == 4
    assert s.gap_size == 8


def test_split_too_few():
    with pytest.raises(TooFewNodes):
        detect_split(_curve([1, 2, 3]), 2)


def test_split_invariant_under_relabeling():
    g = planted_two_community(15, 0.5, 0.05, seed=8)
    perm = np.random.default_rng(0).permutation(g.node_count)
    h = from_edge_list([(int(perm[u]), int(perm[v])) for u, v, _ in g.edges])
    a = detect_split(sorted_curve(g, 0), 3)
    b = detect_split(sorted_curve(h, int(perm[0])), 3)
    assert a.gap_size == pytest.approx(b.gap_size, rel=1e-9)
    mapped = tuple(frozenset(int(perm[v]) for v in grp) for grp in a.groups)
    assert mapped == b.groups


def test_split_recovers_planted_partition():
    labels = planted_labels(50)
    good = 0
    for seed in range(20):
        g = planted_two_community(50, 0.3, 0.02, seed=seed)
        c = sorted_curve(g, 0)
        s = detect_split(c, 5)
        pred = s.labels(c.nodes)
        correct = int((pred == labels[c.nodes]).sum())
        good += correct >= 90
    assert good > 10


def test_distances_k2(k2):
    rep = pairwise_distances(k2, [0, 1])
    assert rep.pairs == ((0, 1, 1.0, 1.0, 1.0),)


@pytest.mark.parametrize("g", [complete_graph(5), complete_graph(6, 2.5), cycle_graph(7)],
                         ids=["K5", "K6w", "C7"])
def test_vertex_transitive_symmetric(g):
    rep = pairwise_distances(g, range(g.node_count))
    for u, v, d_uv, d_vu, ratio in rep.pairs:
        assert d_uv == pytest.approx(d_vu, rel=1e-12)
        assert ratio == pytest.approx(1.0, rel=1e-12)
        assert d_uv >= 1


def test_distance_matches_solver(fig1):
    rep = pairwise_distances(fig1, [0, 3, 4])
    pairs = {(u, v): (a, b) for u, v, a, b, _ in rep.pairs}
    r = reduce(fig1, 3)
    assert pairs[(0, 3)][0] == moments(r).mean[r.index_of[0]]
    assert pairs[(0, 3)][0] == pytest.approx(9, abs=1e-10)
    assert pairs[(3, 4)] == (pytest.approx(pairs[(3, 4)][0]), 1.0)


def test_fig1_reverse_distance_cross_checked(fig1):
    rep = pairwise_distances(fig1, [0, 3])
    (_, _, d_03, d_30, ratio), = rep.pairs
    assert d_03 == pytest.approx(9, abs=1e-10)
    s = simulate(fig1, 0, [3], 200_000, seed=17)
    assert abs(s.sample_mean[0] - d_30) < 5 * s.std_error[0]
    assert ratio == max(d_03, d_30) / min(d_03, d_30)


def test_clique_pendant_asymmetry_direction():
    g = clique_plus_pendant(10, 3)
    (_, _, d_to_pendant, d_from_pendant, _), = pairwise_distances(g, [9, 10]).pairs
    to_pendant, _ = exact_moments(g.edges, 10)
    from_pendant, _ = exact_moments(g.edges, 9)
    assert to_pendant[9] == 31 and from_pendant[10] == Fraction(75, 11)
    assert d_to_pendant == pytest.approx(31, rel=1e-11)
    assert d_from_pendant == pytest.approx(75 / 11, rel=1e-11)
    assert d_to_pendant > 4 * d_from_pendant


def test_pairwise_threads_identical():
    g = planted_two_community(10, 0.5, 0.1, seed=3)
    a = pairwise_distances(g, [0, 5, 12, 19], threads=1)
    b = pairwise_distances(g, [0, 5, 12, 19], threads=3)
    assert a.pairs == b.pairs


def test_pairwise_rejects_duplicates(fig1):
    with pytest.raises(ValueError):
        pairwise_distances(fig1, [0, 0])
