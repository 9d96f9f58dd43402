"""Seeded random instances."""

from __future__ import annotations

import math

import numpy as np

from .decomposition import THETA0_EDGES
from .graph import ErrorCode, Graph, PebbleError, PmgInstance

MODELS = ("tree", "cycle", "random_connected", "grid", "theta0")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_tree_edges(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random recursive tree under a random relabeling."""
    if n <= 1:
        return np.zeros((0, 2), dtype=np.int64)
    child = np.arange(1, n, dtype=np.int64)
    parent = np.floor(rng.random(n - 1) * child).astype(np.int64)
    relabel = rng.permutation(n)
    return np.stack([relabel[parent], relabel[child]], axis=1)


def _grid_shape(n: int) -> tuple[int, int]:
    rows = max(r for r in range(1, math.isqrt(n) + 1) if n % r == 0)
    return rows, n // rows


def grid_edges(rows: int, cols: int) -> np.ndarray:
    idx = np.arange(rows * cols).reshape(rows, cols)
    horiz = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1)
    vert = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1)
    return np.concatenate([horiz, vert])


def random_connected_edges(n: int, rng: np.random.Generator, m_target: int | None = None) -> np.ndarray:
    """Random tree plus uniformly random extra edges, about ``2n`` in total."""
    tree = random_tree_edges(n, rng)
    cap = n * (n - 1) // 2
    m_target = min(2 * n if m_target is None else m_target, cap)
    edges = tree
    while edges.shape[0] < m_target:
        k = m_target - edges.shape[0]
        extra = rng.integers(0, n, size=(k + k // 8 + 4, 2))
        extra = extra[extra[:, 0] != extra[:, 1]]
        both = np.sort(np.concatenate([edges, extra]), axis=1)
        keys = both[:, 0] * n + both[:, 1]
        _, first = np.unique(keys, return_index=True)
        # keep tree edges, then new edges in sampled order
        first = np.sort(first)[:m_target]
        edges = both[first]
    return edges


def generate_instance(n: int, p: int, model: str, seed: int) -> PmgInstance:
    """Random instance with independently placed start and goal."""
    if model not in MODELS:
        raise PebbleError(ErrorCode.BAD_PARAMS, f"unknown model {model!r}")
    if n < 1 or p < 0 or p > n:
        raise PebbleError(ErrorCode.BAD_PARAMS, f"need 0 <= p <= n and n >= 1 (n={n}, p={p})")
    rng = _rng(seed)
    if model == "tree":
        edges = random_tree_edges(n, rng)
    elif model == "cycle":
        if n < 3:
            raise PebbleError(ErrorCode.BAD_PARAMS, "a cycle needs n >= 3")
        v = np.arange(n)
        edges = np.stack([v, (v + 1) % n], axis=1)
    elif model == "grid":
        edges = grid_edges(*_grid_shape(n))
    elif model == "theta0":
        if n != 7:
            raise PebbleError(ErrorCode.BAD_PARAMS, "theta0 has exactly 7 vertices")
        edges = np.array(THETA0_EDGES, dtype=np.int64)
    else:
        edges = random_connected_edges(n, rng)
    g = Graph(n, edges)
    start = rng.permutation(n)[:p]
    goal = rng.permutation(n)[:p]
    return PmgInstance(g, start, goal)
