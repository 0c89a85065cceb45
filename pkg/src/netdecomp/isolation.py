"""Turning a low s-hop-degree clustering into an s-separated one.

Each cluster C gets a variable x_C from a pairwise space with bias about
1/(4k).  With S_u the clusters within distance s of u's tree path,

    utility u(x) = sum_C |C| x_C
    cost    c(x) = sum_u sum_{C in S_u, C != C_u} x_{C_u} x_C

and u(x) - c(x) lower-bounds the number of nodes whose selected cluster has
no other selected cluster nearby.  The seed is fixed to maximize u - c; the
selected clusters are then pruned to the nodes of hop degree 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .clustering import Cluster, Clustering, SeparationCheck, compute_su, s_hop_degree, verify_separation
from .graph import Graph
from .pairwise import PairwiseObjective, build_space, sample


class PreconditionError(ValueError):
    pass


@dataclass
class SeparatedClustering:
    clustering: Clustering
    s: int
    selected: List[int]                 # input cluster indices picked by the seed
    origin: List[int]                   # input cluster index of every output cluster
    input_count: int
    k: int
    bias: Fraction
    utility: int = 0
    cost: int = 0
    expected_gain: Fraction = Fraction(0)
    seed_bits: int = 0
    evaluations: int = 0
    check: Optional[SeparationCheck] = None

    @property
    def clustered_count(self) -> int:
        return self.clustering.clustered_count

    @property
    def count_bound(self) -> Fraction:
        return Fraction(self.input_count, 8 * self.k)


def _prune(g: Graph, clusters: List[Cluster], s: int) -> List[Cluster]:
    """Keep, in each cluster, the nodes with s-hop degree 1 (a subtree holding the center)."""
    su = compute_su(g, Clustering(clusters), s)
    out = []
    for c in clusters:
        keep = {v for v in c.nodes if len(su[v]) == 1}
        if not keep:
            out.append(None)
            continue
        assert c.center in keep, "pruned node set must contain the center"
        parent = {v: c.parent[v] for v in keep}
        assert all(p in keep for p in parent.values()), "pruned node set must be closed under tree parents"
        out.append(Cluster(c.center, frozenset(keep), parent))
    return out


def subsample(g: Graph, clustering: Clustering, s: int, k: int) -> SeparatedClustering:
    clusters = clustering.clusters
    total = clustering.clustered_count
    if k < 1 or s < 1:
        raise ValueError("s and k must be positive")
    _, degree = s_hop_degree(g, clustering, s)
    if degree > k:
        raise PreconditionError(f"input s-hop degree {degree} exceeds k = {k}")
    if not clusters:
        sc = SeparatedClustering(Clustering([]), s, [], [], 0, k, Fraction(0))
        sc.check = verify_separation(g, sc.clustering, s)
        return sc

    su = compute_su(g, clustering, s)
    owner = clustering.owner()
    pairs: Counter = Counter()
    for u, near in su.items():
        cu = owner[u]
        for other in near:
            if other != cu:
                pairs[(min(cu, other) + 1, max(cu, other) + 1)] += 1
    space = build_space(len(clusters), Fraction(1, 4 * k))
    obj = PairwiseObjective(space,
                            linear={i + 1: -len(c.nodes) for i, c in enumerate(clusters)},
                            pairs=[(i, j, w) for (i, j), w in sorted(pairs.items())])
    expected = -obj.expectation(())
    if expected < Fraction(total, 8 * k):
        raise AssertionError(f"expected gain {float(expected):.3f} below {total}/(8k)")
    seed = obj.minimize()
    selected = [i - 1 for i in sample(space, seed)]
    gain = -obj.value(x + 1 for x in selected)
    if gain < expected:
        raise AssertionError("bit fixing lost utility against the expectation")
    utility = sum(len(clusters[i].nodes) for i in selected)

    pruned = _prune(g, [clusters[i] for i in selected], s)
    kept = [(c, i) for c, i in zip(pruned, selected) if c is not None]
    out = Clustering([c for c, _ in kept])
    res = SeparatedClustering(out, s, selected, [i for _, i in kept], total, k, space.bias,
                              utility, utility - gain, expected, space.seed_len, obj.evaluations)
    if res.clustered_count < gain:
        raise AssertionError("fewer kept nodes than utility minus cost")
    if res.clustered_count < res.count_bound:
        raise AssertionError(f"kept {res.clustered_count} nodes, below {total}/(8k)")
    res.check = verify_separation(g, out, s)
    if not res.check.ok:
        raise AssertionError(f"output is not {s}-separated: {res.check.witness}")
    return res
