"""Collapsing 2-edge-connected components so the problem lives on a tree."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .decomposition import NONE, GraphAnalysis
from .equivalence import EquivalenceClasses
from .graph import EMPTY, Configuration, ErrorCode, Graph, PebbleError, PpgInstance
from .reduction import reposition

ORIGINAL, PORT, HUB = 0, 1, 2


@dataclass(frozen=True, eq=False)
class ContractedInstance:
    """Tree instance whose pebbles stand for groups of original pebbles.

    Each MTEC ``k`` becomes the edge ``(port, hub)`` and bridges touching it
    attach to the port. ``vertex_kind``/``vertex_ref`` give the origin of
    every tree vertex (original vertex id, or MTEC id for ports and hubs).
    Tree pebble ``j`` stands for original pebbles ``pebble_groups[j]``.
    """

    tree: Graph
    start: Configuration
    group_of: np.ndarray
    vertex_kind: np.ndarray
    vertex_ref: np.ndarray

    @cached_property
    def pebble_groups(self) -> tuple[tuple[int, ...], ...]:
        order = np.argsort(self.group_of, kind="stable")
        bounds = np.flatnonzero(np.diff(self.group_of[order])) + 1
        return tuple(tuple(c.tolist()) for c in np.split(order, bounds)) if order.size else ()


class ContractionPlan:
    """Occupancy-independent part of the contraction for one graph."""

    def __init__(self, analysis: GraphAnalysis):
        g = analysis.graph
        d = analysis.decomposition
        if d.n_mtecs == 0 or not d.bridge_flags.any():
            raise PebbleError(ErrorCode.PRECONDITION, "graph needs both bridges and cycles")
        k = d.n_mtecs
        mt = d.mtec_id
        outside = mt == NONE
        n_out = int(outside.sum())
        self.new_id = np.cumsum(outside) - 1
        self.port = n_out + 2 * np.arange(k)
        self.hub = self.port + 1
        mp = np.where(outside, self.new_id, self.port[np.maximum(mt, 0)])
        br = g.edges[d.bridge_flags]
        edges = np.concatenate([mp[br], np.stack([self.port, self.hub], axis=1)])
        self.tree = Graph(n_out + 2 * k, edges, check=False)
        x = np.concatenate([br[:, 0], br[:, 1]])
        u = np.concatenate([br[:, 1], br[:, 0]])
        keep = mt[x] != NONE
        self.bridge_inner, self.bridge_outer = x[keep], u[keep]
        inside = np.flatnonzero(~outside)
        self.first = np.full(k, g.n, dtype=np.int64)
        np.minimum.at(self.first, mt[inside], inside)
        self.vertex_kind = np.concatenate([np.full(n_out, ORIGINAL), np.tile([PORT, HUB], k)])
        self.vertex_ref = np.concatenate([np.flatnonzero(outside), np.repeat(np.arange(k), 2)])
        self.target_order = _target_order(analysis)


def _target_order(analysis: GraphAnalysis) -> np.ndarray:
    """All-but-one vertex of every MTEC, then their last vertices, then the rest by distance."""
    g = analysis.graph
    d = analysis.decomposition
    k = d.n_mtecs
    rank = np.empty(k, dtype=np.int64)
    rank[np.lexsort((np.arange(k), -d.mtec_sizes))] = np.arange(k)
    inside = np.flatnonzero(d.mtec_id != NONE)
    inside = inside[np.argsort(rank[d.mtec_id[inside]] * g.n + inside, kind="stable")]
    grp = rank[d.mtec_id[inside]]
    is_last = np.append(grp[1:] != grp[:-1], True)
    order, _, _, _ = _kernels.bfs(g.indptr, g.indices, g.edge_ids, inside)
    outside = order[d.mtec_id[order] == NONE]
    return np.concatenate([inside[~is_last], inside[is_last], outside])


def contraction_plan(analysis: GraphAnalysis) -> ContractionPlan:
    plan = analysis.cache.get("contraction")
    if plan is None:
        plan = analysis.cache["contraction"] = ContractionPlan(analysis)
    return plan


def _mtec_counts(analysis: GraphAnalysis, start: Configuration) -> np.ndarray:
    mt = analysis.decomposition.mtec_id[start.positions]
    return np.bincount(mt[mt != NONE], minlength=analysis.decomposition.n_mtecs)


def occupancy_ok(analysis: GraphAnalysis, start: Configuration) -> bool:
    d = analysis.decomposition
    return bool(np.all(_mtec_counts(analysis, start) >= d.mtec_sizes - 1))


def _check_applicable(analysis: GraphAnalysis, p: int) -> None:
    d = analysis.decomposition
    n = analysis.graph.n
    if d.n_mtecs == 0 or not d.bridge_flags.any():
        raise PebbleError(ErrorCode.PRECONDITION, "graph needs both bridges and cycles")
    if not d.n_m - 2 <= p <= n - 2:
        raise PebbleError(ErrorCode.PRECONDITION, f"p={p} outside [{d.n_m - 2}, {n - 2}]")
    if p < d.n_m - d.n_mtecs:
        raise PebbleError(ErrorCode.PRECONDITION, "too few pebbles to fill every MTEC but one vertex")


def prepare_occupancy(instance: PpgInstance, analysis: GraphAnalysis | None = None) -> PpgInstance:
    """Move pebbles so every MTEC holds at least all but one of its vertices."""
    a = GraphAnalysis(instance.graph) if analysis is None else analysis
    _check_applicable(a, instance.p)
    if occupancy_ok(a, instance.start):
        return instance
    target = np.sort(contraction_plan(a).target_order[: instance.p])
    return reposition(instance, target, a)


def contract_arrays(start: Configuration, analysis: GraphAnalysis) -> tuple[ContractionPlan, np.ndarray, np.ndarray, int]:
    """Tree occupancy (group ids per tree vertex), group of every pebble, group count."""
    plan = contraction_plan(analysis)
    d = analysis.decomposition
    st = analysis.spanning_tree
    occ = start.occupant
    hsub = _kernels.subtree_sums(st.parent, st.order, (occ == EMPTY).astype(np.int64))
    status, tree_occ, group_of, n_groups = _kernels.contract_occupancy(
        occ, d.mtec_id, d.mtec_sizes, plan.new_id, plan.port, plan.hub,
        plan.bridge_inner, plan.bridge_outer, st.parent, hsub, analysis.graph.n - start.p,
        plan.first, plan.tree.n,
    )
    if status == 1:
        raise PebbleError(ErrorCode.OCCUPANCY_VIOLATION, "an MTEC has two or more empty vertices")
    if status == 2:
        raise PebbleError(ErrorCode.PRECONDITION, "a full MTEC cannot be emptied")
    return plan, tree_occ, group_of, int(n_groups)


def contract(instance: PpgInstance, analysis: GraphAnalysis | None = None) -> ContractedInstance:
    a = GraphAnalysis(instance.graph) if analysis is None else analysis
    plan, tree_occ, group_of, n_groups = contract_arrays(instance.start, a)
    positions = np.empty(n_groups, dtype=np.int64)
    held = tree_occ != EMPTY
    positions[tree_occ[held]] = np.flatnonzero(held)
    return ContractedInstance(
        tree=plan.tree,
        start=Configuration(positions, plan.tree.n, check=False),
        group_of=group_of,
        vertex_kind=plan.vertex_kind,
        vertex_ref=plan.vertex_ref,
    )


def expand_classes(contracted: ContractedInstance, classes: EquivalenceClasses) -> EquivalenceClasses:
    """Lift tree-pebble classes back to the original pebbles."""
    return EquivalenceClasses.from_labels(classes.class_id[contracted.group_of])
