"""Low-degree clustering through a derandomized delay function.

Every node v starts a BFS token at time del(v).  wait(u) is the first arrival
time at u, frontier^D(u) the set of v with del(v) + d(v,u) <= wait(u) + D,
and c_u the smallest id in frontier^0(u).  Nodes whose frontier^{2s} has at
most k members join the cluster of c_u.

The delays are built in R phases of k iterations.  Iteration (i, j) picks a
set S of still-active nodes by fixing the seed of a pairwise space so that an
exactly computed potential never increases; active nodes after phase i are
the union of the picked sets and get their delay lowered by 5s.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

import heapq

from .clustering import Clustering, make_cluster, s_hop_degree
from .graph import Graph, component_strong_diameter, connected_components, induced_subgraph
from .pairwise import PairwiseObjective, build_space, sample

DEFAULT_CK = 100
FAST_CK = 4
SCALE_BITS = 128


@dataclass(frozen=True)
class DelayConstants:
    c_k: float = DEFAULT_CK
    k: Optional[int] = None   # explicit override
    R: Optional[int] = None

    def phases(self, n: int) -> int:
        if self.R is not None:
            return self.R
        return max(1, (n * n).bit_length() - 1)   # floor(2 log2 n)

    def degree(self, n: int) -> int:
        if self.k is not None:
            return self.k
        return max(1, math.ceil(self.c_k * math.log2(math.log2(max(n, 4)))))


FAST = DelayConstants(FAST_CK)


@lru_cache(maxsize=None)
def exp_table(k: int) -> Tuple[int, ...]:
    """round(e^(x/10) * 2^SCALE_BITS) for x = 0..2k."""
    with localcontext() as ctx:
        ctx.prec = 60 + k // 10
        scale = Decimal(2) ** SCALE_BITS
        return tuple(int((Decimal(x) / 10).exp() * scale + Decimal("0.5")) for x in range(2 * k + 1))


# -- frontier machinery --------------------------------------------------------

@dataclass
class FrontierInfo:
    wait: int
    center: int
    tokens: List[Tuple[int, int]]  # (arrival time, origin) in receipt order
    dead: List[int]
    alive: List[int]

    @property
    def size(self) -> int:
        return len(self.tokens)


def wait_and_centers(g: Graph, delay: Sequence[int]) -> Tuple[List[int], List[int]]:
    """wait(u) = min_v del(v) + d(v,u) and the smallest minimizing v."""
    n = g.node_count
    best: List[Tuple[int, int]] = [(delay[v], v) for v in range(n)]
    heap = [(delay[v], v, v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        t, c, u = heapq.heappop(heap)
        if (t, c) != best[u]:
            continue
        for v, _ in g.adjacency[u]:
            if (t + 1, c) < best[v]:
                best[v] = (t + 1, c)
                heapq.heappush(heap, (t + 1, c, v))
    return [b[0] for b in best], [b[1] for b in best]


def frontier_info(g: Graph, delay: Sequence[int], s: int, k: int,
                  active: Optional[Set[int]] = None, cap: Optional[int] = None) -> List[FrontierInfo]:
    """Token-forwarding simulation of the delayed BFS.

    Each node forwards, one step after arrival, at most `cap` (default k) of
    the new tokens it received in a step, tokens of inactive nodes first and
    then by id, and only during the 2s steps after its first arrival.  A node
    whose frontier^{2s} has at most `cap` members receives all of them;
    otherwise it receives at least `cap`, including all inactive ones up to
    `cap`.  dead/alive are the first k inactive tokens and the first
    k - |dead| active tokens in (arrival, id) order.
    """
    n = g.node_count
    cap = k if cap is None else cap
    is_active = (lambda v: v in active) if active is not None else (lambda v: False)
    wait, center = wait_and_centers(g, delay)
    pending: Dict[int, Dict[int, Set[int]]] = defaultdict(lambda: defaultdict(set))
    for v in range(n):
        pending[delay[v]][v].add(v)
    first: List[Optional[int]] = [None] * n
    got: List[Set[int]] = [set() for _ in range(n)]
    tokens: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    while pending:
        t = min(pending)
        step = pending.pop(t)
        for u in sorted(step):
            if first[u] is None:
                first[u] = t
            if t > first[u] + 2 * s:
                continue
            new = sorted((x for x in step[u] if x not in got[u]), key=lambda x: (is_active(x), x))
            for x in new:
                got[u].add(x)
                tokens[u].append((t, x))
            fwd = new[:cap]
            if fwd:
                for v, _ in g.adjacency[u]:
                    pending[t + 1][v].update(fwd)
    out = []
    for u in range(n):
        assert first[u] == wait[u], "first token arrival must equal the waiting time"
        order = sorted(tokens[u])
        dead = [x for _, x in order if not is_active(x)][:k]
        alive = [x for _, x in order if is_active(x)][:max(0, k - len(dead))]
        out.append(FrontierInfo(wait[u], center[u], order, dead, alive))
    return out


# -- potentials and good sets --------------------------------------------------

@dataclass
class GoodSet:
    chosen: List[int]
    lhs: Fraction
    rhs: Fraction
    expected: Fraction
    seed_bits: int = 0
    evaluations: int = 0


def good_set(i: int, j: int, k: int, active: Sequence[int], alive: Dict[int, List[int]],
             weight: Dict[int, int], scale: int) -> GoodSet:
    """Pick S among `active` with

        sum_u Y(u) phi_{j-1}(u) / (1 - a_u/10k) + |S| 2^i <= sum_u phi_{j-1}(u) + 2^(i-1) |active| / k

    where Y(u) = 1 - |alive(u) & S| + C(|alive(u) & S|, 2).  `weight[u]` is
    the numerator of phi_{j-1}(u) / (1 - a_u/10k) over `scale` (only nodes with
    nonzero weight are listed); phi_{j-1}(u) equals that value times
    (1 - a_u/10k).
    """
    if i < 1:
        raise ValueError("phases start at 1")
    K = 10 * k
    active = sorted(active)
    # everything is multiplied by K*k*scale to stay integral
    base = K * k
    rhs_num = sum(weight[u] * (K - len(alive[u])) * k for u in weight) + (1 << (i - 1)) * len(active) * scale * K
    size_coef = (1 << i) * scale * base
    const = sum(weight[u] * base for u in weight if not alive[u])
    cliques = [u for u in weight if alive[u]]
    den = scale * base
    if not active or not cliques:
        lhs = Fraction(const, den)
        return GoodSet([], lhs, Fraction(rhs_num, den), lhs)
    index = {v: idx + 1 for idx, v in enumerate(active)}
    space = build_space(len(active), Fraction(1, 4 * k))
    obj = PairwiseObjective(space,
                            cliques=[[index[v] for v in alive[u]] for u in cliques],
                            clique_coefs=[weight[u] * base for u in cliques],
                            linear={idx: 1 for idx in range(1, len(active) + 1)},
                            lin_scale=size_coef)
    one = 1 << (2 * space.ell)
    expected = Fraction(obj.scaled_expectation(()) + const * one, one * den)
    rhs = Fraction(rhs_num, den)
    if expected > rhs:
        raise AssertionError(f"phase {i} iteration {j}: set is not good in expectation")
    seed = obj.minimize()
    chosen = [active[x - 1] for x in sample(space, seed)]
    lhs = Fraction(obj.value(index[v] for v in chosen) + const, den)
    if lhs > expected:
        raise AssertionError(f"phase {i} iteration {j}: bit fixing increased the objective")
    return GoodSet(chosen, lhs, rhs, expected, space.seed_len, obj.evaluations)


@dataclass
class TraceRow:
    phase: int
    iteration: int
    inner: Fraction
    chosen: int
    active: int


@dataclass
class ComponentRun:
    nodes: List[int]
    R: int
    k: int
    delays: List[int]
    outer: List[Fraction] = field(default_factory=list)
    trace: List[TraceRow] = field(default_factory=list)
    seed_bits: int = 0
    evaluations: int = 0
    bfs_steps: int = 0


@dataclass
class DelayResult:
    delays: List[int]
    s: int
    components: List[ComponentRun]

    def trace_lines(self) -> List[str]:
        lines = []
        for comp in self.components:
            for row in comp.trace:
                lines.append(f"{float(row.inner):.12g}\t{row.chosen}\t{row.active}")
        return lines


def outer_potential(i: int, infos: Sequence[FrontierInfo], active: Set[int], table) -> Fraction:
    return Fraction(sum(table[len(f.dead)] for f in infos), 1 << SCALE_BITS) + (1 << i) * len(active)


def _run_component(g: Graph, s: int, R: int, k: int) -> ComponentRun:
    n = g.node_count
    table = exp_table(k)
    K = 10 * k
    top = 1 << SCALE_BITS
    delay = [5 * s * R] * n
    active: Set[int] = set(range(n))
    run = ComponentRun(list(range(n)), R, k, delay)
    infos = frontier_info(g, delay, s, k, active)
    run.bfs_steps += max(delay) + n
    Phi = outer_potential(0, infos, active, table)
    run.outer.append(Phi)
    for i in range(1, R + 1):
        alive = {u: list(infos[u].alive) for u in range(n)}
        base = {u: table[len(infos[u].dead) + len(alive[u])] for u in range(n)}
        unhit = set(range(n))
        W: Set[int] = set()
        prev_active = len(active)
        act_sorted = sorted(active)

        def inner(j: int) -> Fraction:
            e = k - j
            num = sum(base[u] * (K - len(alive[u])) ** e for u in unhit) * k
            den = top * K ** e * k
            rest = (1 << i) * len(W) * den + (e << (i - 1)) * prev_active * top * K ** e
            return Fraction(num + rest, den)

        phi = inner(0)
        if phi > Phi:
            raise AssertionError(f"phase {i}: inner potential starts above the outer potential")
        for j in range(1, k + 1):
            e = k - j
            weight = {u: base[u] * (K - len(alive[u])) ** e for u in unhit}
            gs = good_set(i, j, k, act_sorted, alive, weight, top * K ** e)
            run.seed_bits += gs.seed_bits
            run.evaluations += gs.evaluations
            chosen = set(gs.chosen)
            W |= chosen
            if chosen:
                unhit = {u for u in unhit if not chosen.intersection(alive[u])}
            nxt = inner(j)
            if nxt > phi:
                raise AssertionError(f"inner potential increased at phase {i}, iteration {j}")
            phi = nxt
            run.trace.append(TraceRow(i, j, phi, len(chosen), len(active)))
        active = W
        for u in active:
            delay[u] -= 5 * s
        infos = frontier_info(g, delay, s, k, active)
        run.bfs_steps += max(delay) + n
        new_Phi = outer_potential(i, infos, active, table)
        if new_Phi > Phi + n:
            raise AssertionError(f"outer potential grew by more than n in phase {i}")
        if new_Phi > phi + n:
            raise AssertionError(f"outer potential exceeds the final inner potential plus n in phase {i}")
        Phi = new_Phi
        run.outer.append(Phi)
    if n >= 2 and Phi > 4 * n * math.log2(n):
        raise AssertionError("final outer potential exceeds 4 n log2 n")
    run.delays = delay
    return run


def compute_delays(g: Graph, s: int, constants: DelayConstants = DelayConstants()) -> DelayResult:
    """Delay function for every connected component, with component-local R and k."""
    if s < 1:
        raise ValueError("s must be positive")
    delays = [0] * g.node_count
    runs = []
    for comp in connected_components(g):
        sub, table = induced_subgraph(g, comp)
        n = sub.node_count
        run = _run_component(sub, s, constants.phases(n), constants.degree(n))
        run.nodes = table
        for local, orig in enumerate(table):
            delays[orig] = run.delays[local]
        runs.append(run)
    return DelayResult(delays, s, runs)


def extract_clustering(g: Graph, delay: Sequence[int], s: int, k: int) -> Clustering:
    """Cluster every u with |frontier^{2s}(u)| <= k around c_u, with a BFS tree per cluster."""
    infos = frontier_info(g, delay, s, k, cap=k + 1)
    groups: Dict[int, List[int]] = defaultdict(list)
    for u, f in enumerate(infos):
        if f.size <= k:
            groups[f.center].append(u)
    clusters = []
    for c in sorted(groups):
        if c not in groups[c]:
            raise AssertionError(f"center {c} is not in its own cluster")
        clusters.append(make_cluster(g, c, groups[c]))
    return Clustering(clusters)


@dataclass
class LowDegreeResult:
    clustering: Clustering
    delays: DelayResult
    k: int          # largest per-component degree bound
    diameter_bound: int


def low_degree_clustering(g: Graph, s: int, constants: DelayConstants = DelayConstants()) -> LowDegreeResult:
    dr = compute_delays(g, s, constants)
    clusters = []
    kmax, dmax = 1, 0
    for run in dr.components:
        sub, table = induced_subgraph(g, run.nodes)
        local = extract_clustering(sub, run.delays, s, run.k)
        clusters.extend(local.relabel(table).clusters)
        kmax = max(kmax, run.k)
        dmax = max(dmax, 10 * s * run.R)
    return LowDegreeResult(Clustering(clusters).sorted(), dr, kmax, dmax)


@dataclass
class ClusteringCheck:
    clustered: int
    n: int
    max_degree: int
    degree_bound: int
    max_diameter: float
    diameter_bound: int

    @property
    def ok(self) -> bool:
        return (2 * self.clustered >= self.n and self.max_degree <= self.degree_bound
                and self.max_diameter <= self.diameter_bound)


def check_low_degree(g: Graph, res: LowDegreeResult, s: int) -> ClusteringCheck:
    _, deg = s_hop_degree(g, res.clustering, s)
    diam = max((component_strong_diameter(g, c.nodes) for c in res.clustering.clusters), default=0)
    return ClusteringCheck(res.clustering.clustered_count, g.node_count, deg, res.k, diam, res.diameter_bound)
