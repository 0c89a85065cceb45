"""(2k-1)-spanners by cluster sampling with deterministic hitting sets.

Clusters start as singletons.  In each of the first k-1 steps a set of
clusters is selected by a hitting-set solve (sets are the neighboring
clusters of every clustered node), and every node outside a selected cluster
either joins the first selected cluster in its (weight, id) order, adding the
lightest edges to all clusters before it, or leaves after adding its lightest
edge to every neighboring cluster.  The last step adds the lightest edge from
every node to every neighboring cluster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from .graph import INF, Graph, all_pairs_distances
from .hitting import HittingInstance, OrderedInstance, reduce_ordered, solve_with_coverage

DEFAULT_GAMMA = 24


def sampling_probability(n: int, k: int, gamma: int = DEFAULT_GAMMA) -> Fraction:
    """n^(-1/k) / gamma to 30 significant digits, never above 1/2."""
    with localcontext() as ctx:
        ctx.prec = 30
        root = Decimal(max(n, 1)) ** (Decimal(1) / Decimal(k))
        whole = int(root.to_integral_value())
        exact = Fraction(whole) if whole ** k == max(n, 1) else Fraction(root)
        return min(Fraction(1) / (gamma * exact), Fraction(1, 2))


@dataclass
class SpannerStep:
    step: int
    clusters: int
    p: Fraction
    selected: int
    retries: int
    edges_added: int
    phi: object = None


@dataclass
class SpannerResult:
    n: int
    k: int
    edges: List[Tuple[int, int, int]]
    steps: List[SpannerStep] = field(default_factory=list)
    gamma: int = DEFAULT_GAMMA

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


def _lightest(g: Graph, v: int, cluster: Dict[int, int], live: Set[Tuple[int, int]]) -> Dict[int, Tuple[int, int]]:
    """Per neighboring cluster, the smallest (weight, neighbor) over live edges."""
    best: Dict[int, Tuple[int, int]] = {}
    for u, w in g.adjacency[v]:
        c = cluster.get(u)
        if c is None or (min(u, v), max(u, v)) not in live:
            continue
        if c not in best or (w, u) < best[c]:
            best[c] = (w, u)
    return best


def build_spanner(g: Graph, k: int, gamma: int = DEFAULT_GAMMA) -> SpannerResult:
    if k < 1:
        raise ValueError("k must be at least 1")
    n = g.node_count
    weighted = not g.is_unit_weight()
    live = {(u, v) for u, v, _ in g.edges()}
    cluster: Dict[int, int] = {v: v for v in range(n)}
    chosen: Set[Tuple[int, int]] = set()
    res = SpannerResult(n, k, [], gamma=gamma)

    def add(v: int, u: int) -> None:
        chosen.add((min(u, v), max(u, v)))

    for i in range(1, k):
        ids = sorted(set(cluster.values()))
        if not ids:
            break
        index = {c: j for j, c in enumerate(ids)}
        members = sorted(cluster)
        near = {v: _lightest(g, v, cluster, live) for v in members}
        order = {v: sorted((b for c, b in near[v].items() if c != cluster[v])) for v in members}
        order = {v: [(w, u, cluster[u]) for w, u in o] for v, o in order.items()}
        per_node = [(v, [index[c] for _, _, c in order[v]]) for v in members if order[v]]

        p = sampling_probability(n, k, gamma)
        retries = 0
        while True:
            if not per_node:
                selected: Set[int] = set()
                phi = 0
                break
            if weighted:
                red = reduce_ordered(OrderedInstance(len(ids), [s for _, s in per_node], p))
                inst = red.instance
            else:
                inst = HittingInstance(len(ids), [s for _, s in per_node], [len(s) for _, s in per_node], p)
            cov = solve_with_coverage(inst)
            selected = {ids[j] for j in cov.H}
            phi = cov.phi
            # at most n^(1 - i/k) clusters may survive the step
            if len(selected) ** k <= n ** (k - i) or retries >= max(1, n.bit_length()):
                break
            retries += 1
            p /= 2
        if len(selected) ** k > n ** (k - i):
            raise AssertionError(f"step {i}: {len(selected)} clusters exceed n^(1-{i}/{k})")

        new_cluster: Dict[int, int] = {}
        before = len(chosen)
        for v in members:
            if cluster[v] in selected:
                new_cluster[v] = cluster[v]
                continue
            pos = next((t for t, (_, _, c) in enumerate(order[v]) if c in selected), None)
            if pos is None:
                for _, u, _ in order[v]:
                    add(v, u)
                for u, _ in g.adjacency[v]:
                    live.discard((min(u, v), max(u, v)))
                continue
            dropped = set()
            for _, u, c in order[v][:pos + 1]:
                add(v, u)
                dropped.add(c)
            new_cluster[v] = order[v][pos][2]
            for u, _ in g.adjacency[v]:
                if cluster.get(u) in dropped:
                    live.discard((min(u, v), max(u, v)))
        for a, b in list(live):
            ca, cb = new_cluster.get(a), new_cluster.get(b)
            if ca is None or cb is None or ca == cb:
                live.discard((a, b))
        cluster = new_cluster
        res.steps.append(SpannerStep(i, len(ids), p, len(selected), retries, len(chosen) - before, phi))

    before = len(chosen)
    for v in range(n):
        for c, (w, u) in _lightest(g, v, cluster, live).items():
            if c != cluster.get(v):
                add(v, u)
    res.steps.append(SpannerStep(k, len(set(cluster.values())), Fraction(0), 0, 0, len(chosen) - before))
    res.edges = sorted((a, b, g.weight(a, b)) for a, b in chosen)
    return res


@dataclass
class StretchReport:
    max_stretch: float
    bound: float
    disconnected_pairs: int

    @property
    def ok(self) -> bool:
        return self.disconnected_pairs == 0 and self.max_stretch <= self.bound


def verify_stretch(g: Graph, edges, bound: float, cap: Optional[int] = None) -> StretchReport:
    """Max over connected pairs of d_H / d_G, from all-pairs distances in both graphs."""
    for a, b, *w in edges:
        gw = g.weight(a, b)
        if gw is None or (w and w[0] != gw):
            raise ValueError(f"edge ({a}, {b}) is not an edge of the input graph")
    h = Graph.from_edges(g.node_count, edges)
    dg = all_pairs_distances(g, cap)
    dh = all_pairs_distances(h, cap)
    mask = np.isfinite(dg) & (dg > 0)
    broken = int(np.count_nonzero(mask & ~np.isfinite(dh)))
    if broken:
        return StretchReport(INF, bound, broken // 2)
    ratio = float(np.max(dh[mask] / dg[mask])) if mask.any() else 1.0
    return StretchReport(max(ratio, 1.0), bound, 0)


def size_bound(n: int, k: int, c: float = 8) -> float:
    return c * (n * k + n ** (1 + 1 / k) * math.log(k))
