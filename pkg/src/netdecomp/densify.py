"""Growing separated clusterings until half the graph is covered, and coloring.

`expand` grows each cluster C to C^{<=cut} where cut is the first radius at
which one more BFS layer adds at most half the current size; clusters that
keep growing for 3x layers are dropped.  `cluster_half` repeatedly runs an
inner clustering on the nodes not yet within distance 1 of a cluster and
expands it.  `decompose` colors the residual graph one cluster_half call at
a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .clustering import Cluster, Clustering, bounded_ball, verify_separation
from .delays import FAST, DelayConstants, low_degree_clustering
from .graph import Graph, component_strong_diameter, induced_subgraph
from .isolation import subsample

Inner = Callable[[Graph, int], Clustering]

DESK_X = 2
DESK_MAX_N = 10 ** 4


class PreconditionError(ValueError):
    pass


def neighborhood(g: Graph, nodes) -> set:
    out = set(nodes)
    for u in nodes:
        out.update(g.neighbors(u))
    return out


# -- expansion -------------------------------------------------------------------

@dataclass
class ExpandedClustering:
    clustering: Clustering
    cuts: List[Optional[int]]   # per input cluster; None marks a dropped cluster
    origin: List[int]           # input index of every output cluster
    input_count: int

    @property
    def dropped(self) -> List[int]:
        return [i for i, c in enumerate(self.cuts) if c is None]


def grow_cluster(g: Graph, c: Cluster, radius: int) -> Cluster:
    """C^{<=radius} with the tree of C extended layer by layer."""
    parent = dict(c.parent)
    layer = sorted(c.nodes)
    for _ in range(radius):
        nxt = []
        for u in layer:
            for v, _ in g.adjacency[u]:
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        layer = nxt
    return Cluster(c.center, frozenset(parent), parent)


def expand(g: Graph, clustering: Clustering, x: int) -> ExpandedClustering:
    if x < 1:
        raise ValueError("x must be positive")
    chk = verify_separation(g, clustering, 10 * x)
    if not chk.ok:
        raise PreconditionError(f"input clusters at distance {chk.distance} < {10 * x}: {chk.witness}")
    cuts: List[Optional[int]] = []
    out, origin = [], []
    for idx, c in enumerate(clustering.clusters):
        dist = bounded_ball(g, c.nodes, 3 * x + 1)
        sizes = [0] * (3 * x + 2)
        for d in dist.values():
            sizes[d] += 1
        for i in range(1, len(sizes)):
            sizes[i] += sizes[i - 1]
        cut = next((i for i in range(3 * x + 1) if 2 * sizes[i + 1] <= 3 * sizes[i]), None)
        cuts.append(cut)
        if cut is not None:
            out.append(grow_cluster(g, c, cut))
            origin.append(idx)
    res = ExpandedClustering(Clustering(out), cuts, origin, clustering.clustered_count)

    grown = res.clustering
    if grown.clusters and not verify_separation(g, grown, 4 * x).ok:
        raise AssertionError("expanded clusters are closer than 4x")
    lost = sum(len(clustering.clusters[i].nodes) for i in res.dropped)
    if lost * 2 ** (x + 1) > g.node_count:
        raise AssertionError("dropped clusters hold more than n / 2^(x+1) nodes")
    if 2 * len(neighborhood(g, grown.nodes())) > 3 * grown.clustered_count:
        raise AssertionError("boundary of the expanded clustering exceeds 1.5 times its size")
    return res


# -- clustering half of the nodes -------------------------------------------

def separated_singletons(g: Graph, x: int) -> Clustering:
    """Greedy maximal set of singleton clusters at pairwise distance >= 10x."""
    blocked = set()
    clusters = []
    for v in range(g.node_count):
        if v not in blocked:
            clusters.append(Cluster(v, frozenset([v]), {v: v}))
            blocked.update(bounded_ball(g, [v], 10 * x - 1))
    return Clustering(clusters)


def pipeline_inner(constants: DelayConstants = FAST) -> Inner:
    """Low-degree clustering at s = 10x followed by subsampling at the same s."""
    def inner(g: Graph, x: int) -> Clustering:
        s = 10 * x
        ld = low_degree_clustering(g, s, constants)
        return subsample(g, ld.clustering, s, ld.k).clustering
    return inner


@dataclass
class HalfStep:
    iteration: int
    residual: int
    clustered: int
    boundary: int
    required: float


@dataclass
class HalfResult:
    clustering: Clustering
    x: int
    steps: List[HalfStep] = field(default_factory=list)


def cluster_half(g: Graph, x: int, inner: Optional[Inner] = None) -> HalfResult:
    inner = inner or pipeline_inner()
    n = g.node_count
    N = 4 * 2 ** x
    clusters: List[Cluster] = []
    covered: set = set()          # clustered nodes and their neighbors
    clustered = 0
    res = HalfResult(Clustering([]), x)
    for i in range(1, N + 1):
        if 2 * clustered >= n:
            break
        keep = [v for v in range(n) if v not in covered]
        sub, table = induced_subgraph(g, keep)
        if keep:
            grown = expand(sub, inner(sub, x), x).clustering.relabel(table)
            clusters.extend(grown.clusters)
            clustered += grown.clustered_count
            covered |= neighborhood(g, grown.nodes())
        current = Clustering(clusters)
        step = HalfStep(i, len(keep), clustered, len(covered), n * min(0.5, i / (8 * 2 ** x)))
        res.steps.append(step)
        if not verify_separation(g, current, 2).ok:
            raise AssertionError(f"iteration {i}: clusters are adjacent")
        if clustered < step.required:
            raise AssertionError(f"iteration {i}: {clustered} clustered, need {step.required}")
        if 2 * len(covered) > 3 * clustered:
            raise AssertionError(f"iteration {i}: boundary {len(covered)} exceeds 1.5 x {clustered}")
    if 2 * clustered < n:
        raise AssertionError(f"only {clustered} of {n} nodes clustered after {N} iterations")
    res.clustering = Clustering(clusters).sorted()
    return res


# -- decomposition --------------------------------------------------------------

def default_x(n: int, profile: str = "desk") -> int:
    """x = 2 on the desk profile up to 10^4 nodes, else ceil(log2(2000 log2 log2 n))."""
    if profile not in ("desk", "strict"):
        raise ValueError(f"unknown profile {profile!r}")
    if profile == "desk" and n <= DESK_MAX_N:
        return DESK_X
    return math.ceil(math.log2(2000 * math.log2(math.log2(max(n, 4)))))


@dataclass
class DecompositionConfig:
    x: Optional[int] = None
    profile: str = "desk"
    constants: DelayConstants = FAST
    inner: Optional[Inner] = None

    def resolve_x(self, n: int) -> int:
        return self.x if self.x is not None else default_x(n, self.profile)

    def diameter_bound(self, n: int) -> int:
        x = self.resolve_x(n)
        return 10 * (10 * x) * self.constants.phases(max(n, 1)) + 6 * x


@dataclass
class NetworkDecomposition:
    n: int
    color: List[int]                    # 1-based color of every node
    clusters: List[List[Cluster]]       # clusters of color c at index c-1
    x: int
    diameter_bound: int
    residuals: List[int] = field(default_factory=list)

    @property
    def colors(self) -> int:
        return len(self.clusters)

    def lines(self) -> List[str]:
        cid, center = {}, {}
        k = 0
        for group in self.clusters:
            for c in group:
                for v in c.nodes:
                    cid[v], center[v] = k, c.center
                k += 1
        return [f"{v} {self.color[v]} {cid[v]} {center[v]}" for v in range(self.n)]


def decompose(g: Graph, config: Optional[DecompositionConfig] = None) -> NetworkDecomposition:
    config = config or DecompositionConfig()
    n = g.node_count
    x = config.resolve_x(n)
    inner = config.inner or pipeline_inner(config.constants)
    color = [0] * n
    groups: List[List[Cluster]] = []
    residual = list(range(n))
    sizes = []
    budget = math.ceil(math.log2(n)) + 1 if n > 1 else 1
    while residual:
        sizes.append(len(residual))
        if len(groups) >= budget:
            raise AssertionError(f"color budget {budget} exhausted with {len(residual)} nodes left")
        sub, table = induced_subgraph(g, residual)
        half = cluster_half(sub, x, inner).clustering.relabel(table)
        groups.append(half.clusters)
        for v in half.nodes():
            color[v] = len(groups)
        residual = [v for v in residual if color[v] == 0]
        if len(residual) * 2 ** len(groups) > n:
            raise AssertionError(f"residual {len(residual)} after color {len(groups)} exceeds n / 2^c")
    return NetworkDecomposition(n, color, groups, x, config.diameter_bound(n), sizes)


@dataclass
class ColorReport:
    color: int
    clusters: int
    nodes: int
    max_diameter: float
    adjacent_pairs: int


@dataclass
class DecompositionReport:
    colors: int
    color_bound: int
    all_colored: bool
    per_color: List[ColorReport]
    max_diameter: float
    diameter_bound: float

    @property
    def ok(self) -> bool:
        return (self.all_colored and self.colors <= self.color_bound and self.max_diameter <= self.diameter_bound
                and all(c.adjacent_pairs == 0 for c in self.per_color))


def verify_decomposition(g: Graph, d: NetworkDecomposition, diameter_bound: Optional[float] = None) -> DecompositionReport:
    """Recomputes colors, adjacency and strong diameters from the raw clusters."""
    n = g.node_count
    seen: Dict[int, int] = {}
    for ci, group in enumerate(d.clusters, start=1):
        for c in group:
            for v in c.nodes:
                seen[v] = -1 if v in seen else ci
    all_colored = len(seen) == n and all(seen[v] == d.color[v] for v in range(n))
    per = []
    for ci, group in enumerate(d.clusters, start=1):
        owner = {}
        for idx, c in enumerate(group):
            for v in c.nodes:
                owner[v] = idx
        bad = set()
        for u, cu in owner.items():
            for v in g.neighbors(u):
                cv = owner.get(v)
                if cv is not None and cv != cu:
                    bad.add((min(cu, cv), max(cu, cv)))
        diam = max((component_strong_diameter(g, c.nodes) for c in group), default=0)
        per.append(ColorReport(ci, len(group), len(owner), diam, len(bad)))
    bound = d.diameter_bound if diameter_bound is None else diameter_bound
    return DecompositionReport(d.colors, math.ceil(math.log2(n)) + 1 if n > 1 else 1, all_colored, per,
                               max((c.max_diameter for c in per), default=0), bound)
