"""Source-restricted approximate distance oracle.

Levels S = A_0 ⊇ A_1 ⊇ ... ⊇ A_{k-1} are picked by ordered hitting sets:
A_i must hit, for every node v, the l nearest members of A_{i-1} in
(distance, id) order.  Each node stores its nearest member of every level
(the pivot) and a bunch of sources closer than the next level; a query
alternates between the endpoints until a pivot falls in the other bunch.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import INF, Graph, all_pairs_distances, dijkstra
from .hitting import OrderedInstance, reduce_ordered, solve_with_coverage
from .spanner import DEFAULT_GAMMA, sampling_probability


def neighborhood_size(n: int, s: int, k: int, log_base=None) -> int:
    """ceil(10 s^(1/k) ln n), or with log to `log_base`."""
    with localcontext() as ctx:
        ctx.prec = 40
        log_n = Decimal(max(n, 2)).ln()
        if log_base is not None:
            log_n /= Decimal(log_base).ln()
        val = 10 * Decimal(s) ** (Decimal(1) / Decimal(k)) * log_n
        return int(val.to_integral_value(rounding="ROUND_CEILING"))


@dataclass
class LevelRecord:
    level: int
    size: int
    p: Fraction
    retries: int
    completed: int      # members added greedily for uncovered neighborhoods
    phi: object = None


@dataclass
class Oracle:
    n: int
    k: int
    sources: List[int]
    levels: List[List[int]]
    pivots: List[List[Optional[Tuple[int, int]]]]    # pivots[v][i] = (node, distance) or None
    bunches: List[Dict[int, int]]
    ell: int
    gamma: int = DEFAULT_GAMMA
    records: List[LevelRecord] = field(default_factory=list)

    @property
    def source_set(self) -> frozenset:
        return frozenset(self.sources)

    @property
    def bunch_total(self) -> int:
        return sum(len(b) for b in self.bunches)

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "sources": self.sources,
            "levels": self.levels,
            "pivots": [[list(p) if p else None for p in row] for row in self.pivots],
            "bunches": [[[w, d] for w, d in sorted(b.items())] for b in self.bunches],
        }
        return json.dumps(doc, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "Oracle":
        doc = json.loads(text)
        return Oracle(doc["n"], doc["k"], doc["sources"], doc["levels"],
                      [[tuple(p) if p else None for p in row] for row in doc["pivots"]],
                      [{w: d for w, d in b} for b in doc["bunches"]], doc["ell"])


def _as_int(d: float):
    return int(d) if d < INF else INF


def build_oracle(g: Graph, sources: Sequence[int], k: int, gamma: int = DEFAULT_GAMMA, log_base=None) -> Oracle:
    if k < 1:
        raise ValueError("k must be at least 1")
    S = sorted(set(sources))
    if not S:
        raise ValueError("source set must be nonempty")
    if any(not (0 <= u < g.node_count) for u in S):
        raise ValueError("source outside the graph")
    n, s = g.node_count, len(S)
    dist = {u: [_as_int(d) for d in dijkstra(g, u)] for u in S}
    ell = neighborhood_size(n, s, k, log_base)

    def nearest(members, v, count):
        near = sorted((dist[w][v], w) for w in members if dist[w][v] < INF)
        return [w for _, w in near[:count]]

    levels = [S]
    records = []
    for i in range(1, k):
        prev = levels[-1]
        index = {w: j for j, w in enumerate(prev)}
        hoods = [nearest(prev, v, ell) for v in range(n)]
        sets = [[index[w] for w in h] for h in hoods if h]
        p = sampling_probability(s, k, gamma)
        retries = 0
        while True:
            chosen = set()
            phi = 0
            if sets:
                red = reduce_ordered(OrderedInstance(len(prev), sets, p))
                cov = solve_with_coverage(red.instance)
                chosen = {prev[j] for j in cov.H}
                phi = cov.phi
            completed = 0
            for h in hoods:
                if h and not chosen.intersection(h):
                    chosen.add(h[0])
                    completed += 1
            if len(chosen) ** k <= s ** (k - i) or retries >= max(1, s.bit_length()):
                break
            retries += 1
            p /= 2
        records.append(LevelRecord(i, len(chosen), p, retries, completed, phi))
        levels.append(sorted(chosen))

    pivots: List[List[Optional[Tuple[int, int]]]] = []
    bunches: List[Dict[int, int]] = []
    for v in range(n):
        row = []
        for level in levels:
            near = min(((dist[w][v], w) for w in level if dist[w][v] < INF), default=None)
            row.append((near[1], near[0]) if near else None)
        pivots.append(row)
        bunch = {}
        for i, level in enumerate(levels):
            nxt = set(levels[i + 1]) if i + 1 < k else set()
            limit = row[i + 1][1] if i + 1 < k and row[i + 1] else INF
            for w in level:
                if w not in nxt and dist[w][v] < limit:
                    bunch[w] = dist[w][v]
        bunches.append(bunch)

    oracle = Oracle(n, k, S, levels, pivots, bunches, ell, gamma, records)
    for i in range(1, k):
        members = set(levels[i])
        for v in range(n):
            hood = nearest(levels[i - 1], v, ell)
            if hood and not members.intersection(hood):
                raise AssertionError(f"level {i} misses the neighborhood of node {v}")
    for v in range(n):
        for w in levels[-1]:
            if dist[w][v] < INF and w not in bunches[v]:
                raise AssertionError(f"bunch of {v} lacks top-level member {w}")
    return oracle


@dataclass
class QueryResult:
    estimate: float
    hops: int


def query(oracle: Oracle, u: int, v: int) -> QueryResult:
    if u not in oracle.source_set:
        raise ValueError(f"{u} is not a source")
    w, i = u, 0
    a, b = u, v
    while w not in oracle.bunches[b]:
        i += 1
        if i >= oracle.k:
            return QueryResult(INF, oracle.k - 1)
        a, b = b, a
        piv = oracle.pivots[a][i]
        if piv is None:
            return QueryResult(INF, i)
        w = piv[0]
    da = 0 if i == 0 else oracle.pivots[a][i][1]
    return QueryResult(da + oracle.bunches[b][w], i)


@dataclass
class OracleReport:
    pairs: int
    max_stretch: float
    mean_stretch: float
    histogram: Dict[int, int]
    violations: int
    bunch_total: int
    size_constant: float
    k: int

    @property
    def ok(self) -> bool:
        return self.violations == 0 and max(self.histogram, default=0) <= self.k - 1


def verify_oracle(oracle: Oracle, g: Graph, cap: Optional[int] = None) -> OracleReport:
    d = all_pairs_distances(g, cap)
    bound = 2 * oracle.k - 1
    worst, total, count, bad = 1.0, 0.0, 0, 0
    hist: Counter = Counter()
    pairs = 0
    for u in oracle.sources:
        for v in range(oracle.n):
            r = query(oracle, u, v)
            hist[r.hops] += 1
            pairs += 1
            true = d[u][v]
            if true == INF:
                bad += r.estimate != INF
                continue
            if not (true <= r.estimate <= bound * true):
                bad += 1
                continue
            if true > 0:
                ratio = r.estimate / true
                worst = max(worst, ratio)
                total += ratio
                count += 1
    s = len(oracle.sources)
    const = oracle.bunch_total / (oracle.n * oracle.k * s ** (1 / oracle.k))
    return OracleReport(pairs, worst, total / count if count else 1.0, dict(sorted(hist.items())), bad,
                        oracle.bunch_total, const, oracle.k)
