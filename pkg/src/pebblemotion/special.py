"""Closed-form feasibility rules for the graph families with a direct answer."""

from __future__ import annotations

import enum
from collections import deque
from typing import Sequence

import numpy as np

from . import _kernels
from .decomposition import GraphAnalysis, GraphTag
from .graph import EMPTY, ErrorCode, PebbleError, PmgInstance, PpgInstance

Instance = PmgInstance | PpgInstance


class RuleTag(str, enum.Enum):
    FULL_OCCUPANCY = "FULL_OCCUPANCY"
    CYCLE_ROTATION = "CYCLE_ROTATION"
    THETA0_ENUM = "THETA0_ENUM"
    TWO_CONN_ALWAYS = "TWO_CONN_ALWAYS"
    TWO_CONN_PARITY = "TWO_CONN_PARITY"
    TEC_SEPARABLE = "TEC_SEPARABLE"
    N_MINUS_1 = "N_MINUS_1"
    NM_MINUS_3 = "NM_MINUS_3"
    CONTRACTION_TREE = "CONTRACTION_TREE"
    TREE_DIRECT = "TREE_DIRECT"
    COMPONENT_MISMATCH = "COMPONENT_MISMATCH"


def _analysis(instance: Instance, analysis: GraphAnalysis | None) -> GraphAnalysis:
    return GraphAnalysis(instance.graph) if analysis is None else analysis


def _is_rotation(a: np.ndarray, b: np.ndarray) -> bool:
    m = a.shape[0]
    if m != b.shape[0]:
        return False
    if m == 0:
        return True
    hits = np.flatnonzero(a == b[0])
    if hits.shape[0] != 1:
        return False
    return bool(np.array_equal(np.roll(a, -int(hits[0])), b))


def decide_full(instance: Instance) -> bool:
    """With every vertex occupied nothing can move."""
    if instance.p != instance.graph.n:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "graph is not fully occupied")
    return instance.start == instance.goal


def decide_cycle(instance: Instance, analysis: GraphAnalysis | None = None) -> bool:
    """Pebbles on a cycle keep their cyclic order and nothing else."""
    a = _analysis(instance, analysis)
    if a.tag is not GraphTag.CYCLE:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "graph is not a cycle")
    if instance.p == instance.graph.n:
        return decide_full(instance)
    order = a.cycle_order
    s = instance.start.occupant[order]
    d = instance.goal.occupant[order]
    return _is_rotation(s[s != EMPTY], d[d != EMPTY])


def _local_bfs(adj: Sequence[Sequence[int]], start: tuple[int, ...], goal: tuple[int, ...]) -> bool:
    """Search over occupant tuples (``EMPTY`` marks a hole)."""
    if start == goal:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        occ = queue.popleft()
        for v, peb in enumerate(occ):
            if peb == EMPTY:
                continue
            for w in adj[v]:
                if occ[w] != EMPTY:
                    continue
                nxt = list(occ)
                nxt[w], nxt[v] = peb, EMPTY
                t = tuple(nxt)
                if t in seen:
                    continue
                if t == goal:
                    return True
                seen.add(t)
                queue.append(t)
    return False


def decide_theta0(instance: Instance) -> bool:
    g = instance.graph
    if g.n != 7 or g.m != 8:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "graph is not theta-zero")
    return _local_bfs(
        g.adjacency,
        tuple(instance.start.occupant.tolist()),
        tuple(instance.goal.occupant.tolist()),
    )


def _shortest_path(analysis: GraphAnalysis, src: int, dst: int) -> list[int]:
    g = analysis.graph
    _, parent, _, _ = _kernels.bfs(g.indptr, g.indices, g.edge_ids, np.array([dst], dtype=np.int64))
    path = [src]
    while path[-1] != dst:
        path.append(int(parent[path[-1]]))
    return path


def parity_normalized(
    instance: Instance,
    blank_path: Sequence[int] | None = None,
    analysis: GraphAnalysis | None = None,
) -> int:
    """Parity (0 even, 1 odd) of the pebble permutation after aligning blanks.

    The goal's blank is walked along ``blank_path`` (default: a shortest
    path) to the start's blank, each step swapping it with a neighbour.
    """
    g = instance.graph
    if instance.p != g.n - 1:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "needs exactly one empty vertex")
    a = _analysis(instance, analysis)
    if not a.graph_class.bipartite:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "graph is not bipartite")
    occ_s = instance.start.occupant
    occ_d = instance.goal.occupant.copy()
    hs = int(np.flatnonzero(occ_s == EMPTY)[0])
    hd = int(np.flatnonzero(occ_d == EMPTY)[0])
    path = _shortest_path(a, hd, hs) if blank_path is None else [int(v) for v in blank_path]
    if not path or path[0] != hd or path[-1] != hs:
        raise PebbleError(ErrorCode.BAD_PARAMS, "path must run from the goal blank to the start blank")
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            raise PebbleError(ErrorCode.NOT_ADJACENT, f"{u} and {v} are not adjacent")
        occ_d[u], occ_d[v] = occ_d[v], occ_d[u]
    goal_pos = np.empty(instance.p, dtype=np.int64)
    mask = occ_d != EMPTY
    goal_pos[occ_d[mask]] = np.flatnonzero(mask)
    sigma = np.arange(g.n)
    occupied = occ_s != EMPTY
    sigma[occupied] = goal_pos[occ_s[occupied]]
    return int(_kernels.cycle_parity_by_group(sigma, np.zeros(g.n, dtype=np.int64), 1)[0])


def decide_two_connected(instance: Instance, analysis: GraphAnalysis | None = None) -> bool:
    a = _analysis(instance, analysis)
    n, p = instance.graph.n, instance.p
    if a.tag not in (GraphTag.TWO_CONNECTED, GraphTag.CYCLE, GraphTag.THETA0) or n < 3:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "graph is not 2-connected")
    if p == n:
        return decide_full(instance)
    if p <= n - 2 or not a.graph_class.bipartite:
        return True
    return parity_normalized(instance, analysis=a) == 0


def one_hole_restrictions(instance: Instance, analysis: GraphAnalysis | None = None) -> bool:
    """Feasibility with one empty vertex shared by start and goal.

    With the hole at ``h`` every block is entered through its vertex nearest
    to ``h``; pebbles can only be permuted among the other vertices of each
    block, and each block's own rule decides which permutations occur.
    """
    g = instance.graph
    n, p = g.n, instance.p
    if p != n - 1:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "needs exactly one empty vertex")
    a = _analysis(instance, analysis)
    occ_s = instance.start.occupant
    occ_d = instance.goal.occupant
    h = int(np.flatnonzero(occ_s == EMPTY)[0])
    if occ_d[h] != EMPTY:
        raise PebbleError(ErrorCode.PRECONDITION, "start and goal must leave the same vertex empty")
    bt = a.blocks
    ok, entry = _kernels.one_hole_check(
        g.indptr, g.indices, g.edges, bt.edge_block, bt.kind, bt.n_blocks,
        bt.cycle_ptr, bt.cycle_verts, occ_s, occ_d, h,
    )
    if not ok:
        return False
    for blk, (verts, adj) in bt.theta0_blocks.items():
        # the hole enters the block through its entry vertex
        s_loc = np.where(verts == entry[blk], EMPTY, occ_s[verts])
        d_loc = np.where(verts == entry[blk], EMPTY, occ_d[verts])
        if not _local_bfs(adj, tuple(s_loc.tolist()), tuple(d_loc.tolist())):
            return False
    return True


def decide_tec_separable(instance: Instance, analysis: GraphAnalysis | None = None) -> bool:
    a = _analysis(instance, analysis)
    if a.tag is not GraphTag.TWO_EDGE_CONNECTED_SEPARABLE:
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "graph is not 2-edge-connected and separable")
    n, p = instance.graph.n, instance.p
    if p == n:
        return decide_full(instance)
    if p <= n - 2:
        return True
    return one_hole_restrictions(instance, a)


def decide_n_minus_1(instance: Instance, analysis: GraphAnalysis | None = None) -> bool:
    return one_hole_restrictions(instance, analysis)


def nm_minus_3_applies(p: int, analysis: GraphAnalysis) -> bool:
    """Enough free room inside the 2-edge-connected part for any permutation."""
    d = analysis.decomposition
    if d.n_mtecs == 0:
        return False
    return p <= d.n_m - 3 or (d.n_mtecs == 1 and p == d.n_m - 2)


def decide_nm_minus_3(instance: Instance, analysis: GraphAnalysis | None = None) -> bool:
    a = _analysis(instance, analysis)
    if not nm_minus_3_applies(instance.p, a):
        raise PebbleError(ErrorCode.NOT_APPLICABLE, "too many pebbles for the free-room rule")
    return True
