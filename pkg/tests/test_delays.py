import itertools
import random
from fractions import Fraction

import pytest

from netdecomp.clustering import Clustering, make_cluster, s_hop_degree
from netdecomp.delays import (FAST, DelayConstants, check_low_degree, compute_delays, exp_table, extract_clustering,
                              frontier_info, good_set, low_degree_clustering, outer_potential, wait_and_centers)
from netdecomp.generators import generate
from netdecomp.graph import Graph, all_pairs_distances


def frontier_by_definition(g, delay, D):
    d = all_pairs_distances(g)
    n = g.node_count
    out = []
    for u in range(n):
        arr = [delay[v] + d[v][u] for v in range(n)]
        w = min(arr)
        out.append((int(w), min(v for v in range(n) if arr[v] == w), {v for v in range(n) if arr[v] <= w + D}))
    return out


def random_graph(rng, n):
    edges = set()
    for _ in range(rng.randint(0, 2 * n) if n > 1 else 0):
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, edges)


def test_constants():
    c = DelayConstants()
    assert c.phases(64) == 12 and c.phases(1) == 1 and c.phases(100) == 13
    assert c.degree(16) == 200 and c.degree(2) == 100
    assert FAST.degree(256) == 12


def test_exp_table_precision():
    import math
    t = exp_table(5)
    assert t[0] == 1 << 128
    for x in range(11):
        assert abs(t[x] / 2 ** 128 - math.exp(x / 10)) < 1e-12
    assert all(a < b for a, b in zip(t, t[1:]))


def test_frontier_examples():
    g = generate("path 3")
    infos = frontier_info(g, [0, 0, 0], 2, 3)
    assert [f.wait for f in infos] == [0, 0, 0]
    assert [f.center for f in infos] == [0, 1, 2]
    infos = frontier_info(g, [0, 10, 10], 2, 2)
    assert infos[1].center == 0 and infos[1].wait == 1
    assert {x for _, x in infos[1].tokens} == {0}


def test_frontier_matches_definition():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 32)
        g = random_graph(rng, n)
        s = rng.randint(1, 3)
        k = rng.randint(1, 6)
        delay = [5 * s * rng.randint(0, 3) for _ in range(n)]
        active = {v for v in range(n) if rng.random() < 0.5}
        ref = frontier_by_definition(g, delay, 2 * s)
        infos = frontier_info(g, delay, s, k, active)
        for u in range(n):
            wait, center, F = ref[u]
            f = infos[u]
            assert (f.wait, f.center) == (wait, center)
            got = {x for _, x in f.tokens}
            assert got <= F
            if len(F) <= k:
                assert got == F
            else:
                assert len(got) >= k
            dead_all = F - active
            assert set(f.dead) <= dead_all and len(f.dead) == min(k, len(dead_all))
            act = F & active
            assert set(f.alive) <= act and len(f.alive) == min(k - len(f.dead), len(act))


def test_frontier_monotone_along_shortest_paths():
    rng = random.Random(8)
    for _ in range(15):
        n = rng.randint(2, 30)
        g = random_graph(rng, n)
        delay = [4 * rng.randint(0, 3) for _ in range(n)]
        d = all_pairs_distances(g)
        ref = frontier_by_definition(g, delay, 4)
        for u in range(n):
            c = ref[u][1]
            for w in range(n):
                if d[u][w] + d[w][c] == d[u][c]:
                    assert ref[w][2] <= ref[u][2]
                    assert ref[w][1] == c


def test_wait_centers_ties_to_smallest_id():
    g = generate("path 3")
    wait, center = wait_and_centers(g, [1, 5, 1])
    assert wait == [1, 2, 1] and center == [0, 0, 2]


def test_good_set_examples():
    gs = good_set(1, 1, 3, [], {}, {}, 1)
    assert gs.chosen == [] and gs.lhs <= gs.rhs
    # single active node without alive sets: forced to S = empty
    gs = good_set(2, 1, 3, [0], {0: []}, {0: 7}, 1)
    assert gs.chosen == [] and gs.lhs <= gs.rhs


def test_good_set_fixed_not_above_expectation_enumerated():
    from netdecomp.pairwise import build_space, sample
    rng = random.Random(2)
    for _ in range(8):
        k = 2
        active = sorted(rng.sample(range(12), rng.randint(1, 7)))
        alive = {u: sorted(rng.sample(active, rng.randint(0, min(k, len(active))))) for u in range(12)}
        weight = {u: rng.randint(1, 50) for u in range(12)}
        gs = good_set(1, 1, k, active, alive, weight, 10)
        space = build_space(len(active), Fraction(1, 4 * k))
        assert space.seed_len <= 12

        def lhs(S):
            S = set(S)
            tot = Fraction(0)
            for u, w in weight.items():
                a = len(S & set(alive[u]))
                tot += Fraction(w, 10) * (1 - a + a * (a - 1) // 2)
            return tot + 2 * len(S)

        seeds = list(itertools.product((0, 1), repeat=space.seed_len))
        mean = sum(lhs(active[x - 1] for x in sample(space, z)) for z in seeds) / len(seeds)
        assert gs.expected == mean
        assert lhs(gs.chosen) == gs.lhs <= mean <= gs.rhs


def test_outer_potential_examples():
    g = generate("path 4")
    table = exp_table(3)
    infos = frontier_info(g, [0] * 4, 2, 3, set(range(4)))
    assert outer_potential(0, infos, set(range(4)), table) == 8
    infos = frontier_info(g, [0] * 4, 2, 3, set())
    assert outer_potential(3, [type(f)(f.wait, f.center, f.tokens, [], []) for f in infos], set(), table) == 4


def test_delays_single_and_isolated():
    res = compute_delays(Graph.from_edges(1, []), 2)
    assert res.components[0].R == 1 and res.delays[0] in (0, 10)
    ld = low_degree_clustering(Graph.from_edges(2, []), 2)
    assert ld.clustering.clustered_count == 2 and len(ld.clustering.clusters) == 2


def test_delay_values_are_multiples():
    g = generate("grid 6 6")
    res = compute_delays(g, 2, FAST)
    R = res.components[0].R
    assert all(0 <= d <= 5 * 2 * R and d % 10 == 0 for d in res.delays)


def test_extract_examples():
    g = Graph.from_edges(4, [])
    cl = extract_clustering(g, [0] * 4, 2, 1)
    assert sorted(len(c.nodes) for c in cl.clusters) == [1, 1, 1, 1]
    s = 2
    star = generate("star 6")
    cl = extract_clustering(star, [0] + [5 * s] * 5, s, 10)
    assert len(cl.clusters) == 1 and cl.clusters[0].nodes == frozenset(range(6))


def test_s_hop_degree_examples():
    g = Graph.from_edges(4, [(0, 1)])
    cl = Clustering([make_cluster(g, 0, [0]), make_cluster(g, 1, [1])])
    per, mx = s_hop_degree(g, cl, 2)
    assert per == {0: 2, 1: 2} and mx == 2
    cl = Clustering([make_cluster(g, 2, [2]), make_cluster(g, 3, [3])])
    assert s_hop_degree(g, cl, 5)[1] == 1


def test_64_node_random_graph_half_clustered():
    g = generate("random 64 192 5")
    res = low_degree_clustering(g, 2, FAST)
    chk = check_low_degree(g, res, 2)
    assert chk.ok, chk


@pytest.mark.parametrize("spec", ["grid 10 10", "path 120", "tree 90"])
def test_structured_graphs(spec):
    g = generate(spec)
    res = low_degree_clustering(g, 2, FAST)
    chk = check_low_degree(g, res, 2)
    assert chk.ok, chk
    for run in res.delays.components:
        for a, b in zip(run.trace, run.trace[1:]):
            if a.phase == b.phase:
                assert b.inner <= a.inner
        for i in range(1, len(run.outer)):
            assert run.outer[i] <= run.outer[i - 1] + len(run.nodes)
