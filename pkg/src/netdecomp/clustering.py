"""Clusterings with rooted trees, s-hop degrees and separation checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .graph import Graph


@dataclass
class Cluster:
    center: int
    nodes: FrozenSet[int]
    parent: Dict[int, int] = field(default_factory=dict)  # tree parent; the center maps to itself

    def path_to_center(self, u: int) -> List[int]:
        path = [u]
        while path[-1] != self.center:
            path.append(self.parent[path[-1]])
        return path

    def relabel(self, table: Sequence[int]) -> "Cluster":
        return Cluster(table[self.center], frozenset(table[v] for v in self.nodes),
                       {table[a]: table[b] for a, b in self.parent.items()})


@dataclass
class Clustering:
    clusters: List[Cluster]

    def owner(self) -> Dict[int, int]:
        out = {}
        for idx, c in enumerate(self.clusters):
            for v in c.nodes:
                if v in out:
                    raise ValueError(f"node {v} belongs to two clusters")
                out[v] = idx
        return out

    def nodes(self) -> set:
        out = set()
        for c in self.clusters:
            out |= c.nodes
        return out

    @property
    def clustered_count(self) -> int:
        return sum(len(c.nodes) for c in self.clusters)

    def relabel(self, table: Sequence[int]) -> "Clustering":
        return Clustering([c.relabel(table) for c in self.clusters])

    def sorted(self) -> "Clustering":
        return Clustering(sorted(self.clusters, key=lambda c: c.center))


def bfs_tree(g: Graph, center: int, nodes: Iterable[int]) -> Dict[int, int]:
    """BFS parents inside G[nodes] rooted at center; raises if G[nodes] is disconnected."""
    allowed = set(nodes)
    parent = {center: center}
    q = deque([center])
    while q:
        u = q.popleft()
        for v, _ in g.adjacency[u]:
            if v in allowed and v not in parent:
                parent[v] = u
                q.append(v)
    if len(parent) != len(allowed):
        raise ValueError(f"cluster around {center} is not connected")
    return parent


def make_cluster(g: Graph, center: int, nodes: Iterable[int]) -> Cluster:
    nodes = frozenset(nodes)
    return Cluster(center, nodes, bfs_tree(g, center, nodes))


def bounded_ball(g: Graph, sources: Iterable[int], radius: int) -> Dict[int, int]:
    dist = {}
    q = deque()
    for v in sources:
        if v not in dist:
            dist[v] = 0
            q.append(v)
    while q:
        u = q.popleft()
        d = dist[u]
        if d == radius:
            continue
        for v, _ in g.adjacency[u]:
            if v not in dist:
                dist[v] = d + 1
                q.append(v)
    return dist


def compute_su(g: Graph, clustering: Clustering, s: int) -> Dict[int, List[int]]:
    """For each clustered u, the indices of clusters within distance s of u's tree path."""
    near: Dict[int, List[int]] = {}
    for idx, c in enumerate(clustering.clusters):
        for w in bounded_ball(g, c.nodes, s):
            near.setdefault(w, []).append(idx)
    out: Dict[int, List[int]] = {}
    for c in clustering.clusters:
        children: Dict[int, List[int]] = {}
        for v, par in c.parent.items():
            if v != par:
                children.setdefault(par, []).append(v)
        out[c.center] = sorted(set(near.get(c.center, [])))
        stack = [c.center]
        while stack:
            u = stack.pop()
            for v in children.get(u, []):
                out[v] = sorted(set(out[u]) | set(near.get(v, [])))
                stack.append(v)
    return out


def s_hop_degree(g: Graph, clustering: Clustering, s: int) -> Tuple[Dict[int, int], int]:
    su = compute_su(g, clustering, s)
    per = {u: len(v) for u, v in su.items()}
    return per, max(per.values(), default=0)


@dataclass
class SeparationCheck:
    ok: bool
    distance: float
    witness: Optional[Tuple[int, int, List[int]]] = None  # cluster indices and a connecting path


def verify_separation(g: Graph, clustering: Clustering, s: int) -> SeparationCheck:
    """True iff every two clusters are at distance >= s; otherwise a closest violating pair."""
    owner = clustering.owner()
    label: Dict[int, int] = {}
    dist: Dict[int, int] = {}
    parent: Dict[int, int] = {}
    q = deque()
    for v in sorted(owner):
        label[v] = owner[v]
        dist[v] = 0
        parent[v] = v
        q.append(v)
    while q:
        u = q.popleft()
        for v, _ in g.adjacency[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                label[v] = label[u]
                parent[v] = u
                q.append(v)
    best = None
    for u in range(g.node_count):
        if u not in label:
            continue
        for v, _ in g.adjacency[u]:
            if v in label and label[v] != label[u]:
                d = dist[u] + dist[v] + 1
                if best is None or d < best[0]:
                    best = (d, u, v)
    if best is None or best[0] >= s:
        return SeparationCheck(True, best[0] if best else float("inf"))
    d, u, v = best

    def climb(x):
        path = [x]
        while parent[path[-1]] != path[-1]:
            path.append(parent[path[-1]])
        return path

    path = climb(u)[::-1] + climb(v)
    return SeparationCheck(False, d, (label[u], label[v], path))
