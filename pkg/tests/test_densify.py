import math
import random

import pytest

from netdecomp.clustering import Clustering, make_cluster, verify_separation
from netdecomp.densify import (DecompositionConfig, NetworkDecomposition, PreconditionError, cluster_half, decompose,
                               expand, separated_singletons, verify_decomposition)
from netdecomp.generators import generate
from netdecomp.graph import Graph, all_pairs_distances, connected_components


def cut_by_definition(g, nodes, x):
    d = all_pairs_distances(g)
    size = [sum(1 for v in range(g.node_count) if min(d[u][v] for u in nodes) <= i) for i in range(3 * x + 2)]
    return next((i for i in range(3 * x + 1) if size[i + 1] <= 1.5 * size[i]), None)


def whole_components(g, x):
    return Clustering([make_cluster(g, comp[0], comp) for comp in connected_components(g)])


def test_expand_isolated_node():
    g = Graph.from_edges(1, [])
    res = expand(g, Clustering([make_cluster(g, 0, [0])]), 2)
    assert res.cuts == [0] and res.clustering.clusters[0].nodes == {0}


def test_expand_star_center():
    g = generate("star 7")
    res = expand(g, Clustering([make_cluster(g, 0, [0])]), 2)
    assert res.cuts == [1] and res.clustering.clusters[0].nodes == frozenset(range(7))


def test_expand_drops_growing_cluster():
    x = 1
    g = generate(f"tree {2 ** (3 * x + 2) - 1}")
    res = expand(g, Clustering([make_cluster(g, 0, [0])]), x)
    assert res.cuts == [None] and res.clustering.clusters == [] and res.dropped == [0]


def test_expand_precondition():
    g = generate("path 5")
    cl = Clustering([make_cluster(g, 0, [0]), make_cluster(g, 4, [4])])
    with pytest.raises(PreconditionError, match="distance 4"):
        expand(g, cl, 1)


def test_expand_matches_definition():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(2, 60)
        g = generate(f"random {n} {n - 1 + rng.randint(0, n // 3)} {rng.randint(0, 500)}")
        x = 1
        cl = separated_singletons(g, x)
        res = expand(g, cl, x)
        d = all_pairs_distances(g)
        for c, cut in zip(cl.clusters, res.cuts):
            assert cut == cut_by_definition(g, c.nodes, x)
        for c, idx in zip(res.clustering.clusters, res.origin):
            cut = res.cuts[idx]
            src = cl.clusters[idx]
            assert c.nodes == {v for v in range(n) if min(d[u][v] for u in src.nodes) <= cut}
            for v in c.nodes:
                path = c.path_to_center(v)
                assert len(path) - 1 <= cut and all(p in c.nodes for p in path)


def test_cluster_half_edgeless():
    g = Graph.from_edges(5, [])
    res = cluster_half(g, 2, separated_singletons)
    assert res.clustering.clustered_count == 5 and len(res.steps) == 1


def test_cluster_half_one_shot():
    g = generate("random 40 80 1")
    res = cluster_half(g, 2, whole_components)
    assert len(res.steps) == 1 and res.clustering.clustered_count == 40


def test_cluster_half_weak_inner_breaks_invariant():
    g = generate("grid 16 16")
    with pytest.raises(AssertionError, match="iteration"):
        cluster_half(g, 1, separated_singletons)


@pytest.mark.parametrize("spec", ["random 128 256 9", "path 400", "grid 20 20"])
def test_cluster_half_pipeline(spec):
    g = generate(spec)
    res = cluster_half(g, 2)
    n = g.node_count
    assert 2 * res.clustering.clustered_count >= n
    assert verify_separation(g, res.clustering, 2).ok
    for st in res.steps:
        assert st.clustered >= n * min(0.5, st.iteration / 32)
        assert 2 * st.boundary <= 3 * st.clustered


def test_decompose_single_node_and_clique():
    d = decompose(Graph.from_edges(1, []))
    assert d.colors == 1 and d.color == [1]
    g = generate("complete 4")
    d = decompose(g)
    assert verify_decomposition(g, d).ok


def test_decompose_lines_format():
    g = generate("path 3")
    d = decompose(g)
    rows = [list(map(int, line.split())) for line in d.lines()]
    assert [r[0] for r in rows] == [0, 1, 2]
    assert all(r[1] >= 1 for r in rows)
    for node, color, cid, center in rows:
        same = [r for r in rows if r[2] == cid]
        assert all(r[1] == color and r[3] == center for r in same)


def test_verify_decomposition_examples():
    g = generate("path 6")
    d = NetworkDecomposition(6, [1] * 6, [[make_cluster(g, 0, range(6))]], 2, 100)
    rep = verify_decomposition(g, d)
    assert rep.ok and rep.max_diameter == 5
    d = NetworkDecomposition(6, [1] * 6, [[make_cluster(g, 0, range(3)), make_cluster(g, 3, range(3, 6))]], 2, 100)
    rep = verify_decomposition(g, d)
    assert not rep.ok and rep.per_color[0].adjacent_pairs == 1
    d = NetworkDecomposition(6, [1] * 6, [[make_cluster(g, 0, range(3))]], 2, 100)
    assert not verify_decomposition(g, d).all_colored


@pytest.mark.parametrize("spec", ["random 256 1024 7", "path 700", "tree 300"])
def test_decompose_verifies(spec):
    g = generate(spec)
    d = decompose(g)
    rep = verify_decomposition(g, d)
    assert rep.ok, rep
    assert rep.colors <= math.ceil(math.log2(g.node_count)) + 1
    for c, size in enumerate(d.residuals[1:], start=1):
        assert size * 2 ** c <= g.node_count


def test_strict_profile_small_graph():
    g = generate("random 64 128 2")
    d = decompose(g, DecompositionConfig(profile="strict"))
    assert d.x == 13 and verify_decomposition(g, d).ok


def test_decompose_weak_inner_multiple_colors():
    g = generate("random 256 1024 7")
    d = decompose(g, DecompositionConfig(x=1, inner=separated_singletons))
    rep = verify_decomposition(g, d)
    assert rep.ok and d.colors > 1
