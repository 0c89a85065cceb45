"""Undirected graph type, edge-list I/O and BFS / shortest-path primitives."""

from __future__ import annotations

import heapq
import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

INF = math.inf
DEFAULT_VERIFY_CAP = 2048
VERIFY_CAP_ENV = "NETDECOMP_VERIFY_CAP"


class GraphFormatError(ValueError):
    """Malformed edge-list document."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(ValueError):
    pass


class CapExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class Graph:
    node_count: int
    adjacency: Tuple[Tuple[Tuple[int, int], ...], ...]

    @staticmethod
    def from_edges(n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from (u, v) or (u, v, w) triples; duplicates keep the minimum weight."""
        best: Dict[Tuple[int, int], int] = {}
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = int(e[2]) if len(e) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphValidationError(f"self-loop at node {u}")
            if w < 1:
                raise GraphValidationError(f"edge ({u},{v}) has weight {w} < 1")
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v), w in best.items():
            adj[u].append((v, w))
            adj[v].append((u, w))
        return Graph(n, tuple(tuple(sorted(a)) for a in adj))

    @property
    def n(self) -> int:
        return self.node_count

    def neighbors(self, u: int) -> List[int]:
        return [v for v, _ in self.adjacency[u]]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def edges(self) -> List[Tuple[int, int, int]]:
        """Each undirected edge once as (u, v, w) with u < v, sorted."""
        return [(u, v, w) for u in range(self.node_count) for v, w in self.adjacency[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def is_unit_weight(self) -> bool:
        return all(w == 1 for a in self.adjacency for _, w in a)

    def weight(self, u: int, v: int) -> Optional[int]:
        for x, w in self.adjacency[u]:
            if x == v:
                return w
        return None


def load_graph(text: str) -> Graph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 2 or nums[0] < 0 or nums[1] < 0:
                raise GraphFormatError("header must be 'n m'", lineno)
            header = (nums[0], nums[1], lineno)
            continue
        if len(nums) not in (2, 3):
            raise GraphFormatError("edge line must be 'u v' or 'u v w'", lineno)
        n = header[0]
        u, v = nums[0], nums[1]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphValidationError(f"line {lineno}: node id out of range 0..{n - 1}")
        if u == v:
            raise GraphValidationError(f"line {lineno}: self-loop at node {u}")
        if len(nums) == 3 and nums[2] < 1:
            raise GraphValidationError(f"line {lineno}: weight must be >= 1")
        edges.append(nums)
    if header is None:
        raise GraphFormatError("missing header line 'n m'")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header announces {header[1]} edges, found {len(edges)}", header[2])
    return Graph.from_edges(header[0], edges)


def dump_graph(g: Graph) -> str:
    lines = [f"{g.node_count} {g.edge_count}"]
    unit = g.is_unit_weight()
    for u, v, w in g.edges():
        lines.append(f"{u} {v}" if unit else f"{u} {v} {w}")
    return "\n".join(lines) + "\n"


def multi_source_bfs(g: Graph, sources: Iterable[Tuple[int, int]]) -> List[float]:
    """Hop distances from a set of (node, start offset) sources; edge weights are ignored."""
    dist: List[float] = [INF] * g.node_count
    buckets: Dict[int, List[int]] = {}
    for node, off in sources:
        if off < dist[node]:
            dist[node] = off
            buckets.setdefault(off, []).append(node)
    if not buckets:
        return dist
    # offsets are small integers, so a bucket queue keeps this linear
    t = min(buckets)
    while buckets:
        for u in buckets.pop(t, []):
            if dist[u] != t:
                continue
            for v, _ in g.adjacency[u]:
                if t + 1 < dist[v]:
                    dist[v] = t + 1
                    buckets.setdefault(t + 1, []).append(v)
        t += 1
    return dist


def bfs_hops(g: Graph, source: int, limit: Optional[int] = None, allowed=None) -> Dict[int, int]:
    """Hop distances from one source, optionally truncated at `limit` and restricted to `allowed`."""
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for v, _ in g.adjacency[u]:
            if v not in dist and (allowed is None or v in allowed):
                dist[v] = d + 1
                q.append(v)
    return dist


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Tuple[Graph, List[int]]:
    """Subgraph on `keep`; returns it with the table new id -> original id."""
    nodes = sorted(set(keep))
    index = {v: i for i, v in enumerate(nodes)}
    adj = []
    for v in nodes:
        adj.append(tuple((index[x], w) for x, w in g.adjacency[v] if x in index))
    return Graph(len(nodes), tuple(adj)), nodes


def connected_components(g: Graph) -> List[List[int]]:
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        q = deque([s])
        while q:
            u = q.popleft()
            for v, _ in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    q.append(v)
        comps.append(sorted(comp))
    return comps


def component_strong_diameter(g: Graph, cluster: Iterable[int]) -> float:
    members = set(cluster)
    if not members:
        raise GraphValidationError("cluster must be nonempty")
    best = 0
    for u in members:
        dist = bfs_hops(g, u, allowed=members)
        if len(dist) < len(members):
            return INF
        best = max(best, max(dist.values()))
    return best


def dijkstra(g: Graph, source: int) -> List[float]:
    dist: List[float] = [INF] * g.node_count
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in g.adjacency[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def verification_cap(cap: Optional[int] = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(VERIFY_CAP_ENV)
    return int(env) if env else DEFAULT_VERIFY_CAP


def all_pairs_distances(g: Graph, cap: Optional[int] = None):
    """Exact all-pairs weighted distances as a float ndarray (inf when unreachable).

    Uses scipy's Dijkstra so that verification does not share code with the
    algorithms it checks.
    """
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra as sp_dijkstra

    limit = verification_cap(cap)
    n = g.node_count
    if n > limit:
        raise CapExceededError(
            f"all-pairs verification refused: n={n} exceeds cap {limit}; lower n or raise {VERIFY_CAP_ENV}")
    if n == 0:
        return np.zeros((0, 0))
    rows, cols, vals = [], [], []
    for u in range(n):
        for v, w in g.adjacency[u]:
            rows.append(u)
            cols.append(v)
            vals.append(float(w))
    mat = csr_matrix((vals, (rows, cols)), shape=(n, n))
    return sp_dijkstra(mat, directed=False)
