"""Exhaustive breadth-first search over configurations (small instances only)."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Any, Iterator

import numpy as np

from .equivalence import EquivalenceClasses
from .graph import Configuration, ErrorCode, Graph, PebbleError, PmgInstance

DEFAULT_CAP = 10_000_000
_WORD = 1 << 63


def state_space_size(n: int, p: int) -> int:
    return math.perm(n, p)


def _check_cap(n: int, p: int, cap: int) -> None:
    size = state_space_size(n, p)
    if size > cap:
        raise PebbleError(ErrorCode.STATE_SPACE_TOO_LARGE, f"{size} configurations exceed cap {cap}")


def encode(positions: Any, n: int) -> int | bytes:
    """Pack a position sequence; integers while ``n**p`` fits in 63 bits."""
    pos = [int(v) for v in positions]
    if n ** len(pos) <= _WORD:
        key = 0
        for v in reversed(pos):
            key = key * n + v
        return key
    return np.asarray(pos, dtype=np.int32).tobytes()


def decode(key: int | bytes, n: int, p: int) -> tuple[int, ...]:
    if isinstance(key, bytes):
        return tuple(np.frombuffer(key, dtype=np.int32).tolist())
    out = []
    for _ in range(p):
        key, v = divmod(key, n)
        out.append(v)
    return tuple(out)


def _explore(adj: tuple[tuple[int, ...], ...], start: tuple[int, ...], goal: tuple[int, ...] | None):
    """BFS over position tuples; yields every visited tuple, stops at ``goal``."""
    seen = {start}
    queue = deque([start])
    yield start
    if start == goal:
        return
    while queue:
        pos = queue.popleft()
        occupied = set(pos)
        for i, v in enumerate(pos):
            for w in adj[v]:
                if w in occupied:
                    continue
                nxt = pos[:i] + (w,) + pos[i + 1 :]
                if nxt in seen:
                    continue
                seen.add(nxt)
                yield nxt
                if nxt == goal:
                    return
                queue.append(nxt)


@dataclass(frozen=True)
class SearchResult:
    reachable: bool
    expansions: int
    visited: int


def oracle_search(instance: PmgInstance, cap: int = DEFAULT_CAP) -> SearchResult:
    """BFS from the start; ``expansions`` counts states whose moves were generated."""
    g = instance.graph
    _check_cap(g.n, instance.p, cap)
    start, goal = instance.start.key(), instance.goal.key()
    if start == goal:
        return SearchResult(True, 0, 1)
    adj = g.adjacency
    seen = {start}
    queue = deque([start])
    expansions = 0
    while queue:
        pos = queue.popleft()
        expansions += 1
        occupied = set(pos)
        for i, v in enumerate(pos):
            for w in adj[v]:
                if w in occupied:
                    continue
                nxt = pos[:i] + (w,) + pos[i + 1 :]
                if nxt in seen:
                    continue
                if nxt == goal:
                    return SearchResult(True, expansions, len(seen) + 1)
                seen.add(nxt)
                queue.append(nxt)
    return SearchResult(False, expansions, len(seen))


def oracle_reachable(instance: PmgInstance, cap: int = DEFAULT_CAP) -> bool:
    return oracle_search(instance, cap).reachable


def oracle_orbit(graph: Graph, start: Any, cap: int = DEFAULT_CAP) -> set[tuple[int, ...]]:
    """Every configuration reachable from ``start`` as position tuples."""
    s = start if isinstance(start, Configuration) else Configuration(start, graph.n)
    _check_cap(graph.n, s.p, cap)
    return set(_explore(graph.adjacency, s.key(), None))


def oracle_exchange_classes(graph: Graph, start: Any, cap: int = DEFAULT_CAP) -> EquivalenceClasses:
    """Pebbles ``i ~ j`` when the start with ``i`` and ``j`` swapped is reachable."""
    s = start if isinstance(start, Configuration) else Configuration(start, graph.n)
    orbit = oracle_orbit(graph, s, cap)
    base = list(s.key())
    p = len(base)
    parent = list(range(p))
    related = set()
    for i, j in itertools.combinations(range(p), 2):
        swapped = base.copy()
        swapped[i], swapped[j] = swapped[j], swapped[i]
        if tuple(swapped) in orbit:
            related.add((i, j))
            ri, rj = _root(parent, i), _root(parent, j)
            parent[ri] = rj
    roots = [_root(parent, i) for i in range(p)]
    # exchangeability is an equivalence: the union-find must add no pairs
    for i, j in itertools.combinations(range(p), 2):
        assert (roots[i] == roots[j]) == ((i, j) in related), "exchange relation not transitive"
    return EquivalenceClasses.from_labels(roots)


def _root(parent: list[int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def all_configurations(n: int, p: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(n), p)


def orbit_partition(graph: Graph, p: int, cap: int = DEFAULT_CAP) -> dict[tuple[int, ...], int]:
    """Orbit index of every configuration of ``p`` pebbles."""
    _check_cap(graph.n, p, cap)
    label: dict[tuple[int, ...], int] = {}
    adj = graph.adjacency
    k = 0
    for c in all_configurations(graph.n, p):
        if c in label:
            continue
        for x in _explore(adj, c, None):
            label[x] = k
        k += 1
    return label
