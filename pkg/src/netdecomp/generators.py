"""Reproducible graph generators.

Specs are short strings:

    path n            0-1-...-(n-1)
    grid a b          a x b grid, node i*b+j
    tree n            heap-shaped binary tree, parent of v is (v-1)//2
    star n            node 0 joined to 1..n-1
    complete n        all pairs
    random n m seed [maxw]
                      random spanning tree (v attaches to a uniform earlier
                      node) plus uniform extra edges up to m in total; with
                      maxw, every edge gets a uniform weight in 1..maxw
"""

from __future__ import annotations

import random
from typing import List, Sequence, Tuple

from .graph import Graph


class GeneratorSpecError(ValueError):
    pass


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def grid(a: int, b: int) -> Graph:
    edges = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            if j + 1 < b:
                edges.append((v, v + 1))
            if i + 1 < a:
                edges.append((v, v + b))
    return Graph.from_edges(a * b, edges)


def tree(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v - 1) // 2) for v in range(1, n)])


def star(n: int) -> Graph:
    return Graph.from_edges(n, [(0, v) for v in range(1, n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_graph(n: int, m: int, seed: int, max_weight: int = 1) -> Graph:
    if m < n - 1 or m > n * (n - 1) // 2:
        raise GeneratorSpecError(f"need n-1 <= m <= n(n-1)/2, got n={n}, m={m}")
    rng = random.Random(seed)
    seen = set()
    edges: List[Tuple[int, int]] = []
    for v in range(1, n):
        u = rng.randrange(v)
        seen.add((u, v))
        edges.append((u, v))
    while len(edges) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        e = (min(a, b), max(a, b))
        if e not in seen:
            seen.add(e)
            edges.append(e)
    if max_weight > 1:
        return Graph.from_edges(n, [(a, b, rng.randint(1, max_weight)) for a, b in edges])
    return Graph.from_edges(n, edges)


_ARITY = {"path": (1,), "grid": (2,), "tree": (1,), "star": (1,), "complete": (1,), "random": (3, 4)}


def generate(spec: str | Sequence[str]) -> Graph:
    parts = spec.split() if isinstance(spec, str) else list(spec)
    if not parts or parts[0] not in _ARITY:
        raise GeneratorSpecError(f"unknown generator {parts[0] if parts else ''!r}; "
                                 f"choose from {', '.join(sorted(_ARITY))}")
    kind, args = parts[0], parts[1:]
    if len(args) not in _ARITY[kind]:
        raise GeneratorSpecError(f"{kind} takes {' or '.join(map(str, _ARITY[kind]))} arguments")
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise GeneratorSpecError(f"non-integer argument in {' '.join(parts)!r}") from None
    if nums[0] < 1 or (kind == "grid" and nums[1] < 1):
        raise GeneratorSpecError("sizes must be positive")
    if kind == "path":
        return path(nums[0])
    if kind == "grid":
        return grid(*nums)
    if kind == "tree":
        return tree(nums[0])
    if kind == "star":
        return star(nums[0])
    if kind == "complete":
        return complete(nums[0])
    return random_graph(*nums)
