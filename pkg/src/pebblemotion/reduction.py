"""Turning a motion instance into a permutation instance on a common vertex set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import _kernels
from .decomposition import GraphAnalysis, SpanningTree, bfs_tree
from .graph import (
    Configuration,
    ErrorCode,
    Graph,
    PebbleError,
    Permutation,
    PmgInstance,
    PpgInstance,
)


@dataclass(frozen=True, eq=False)
class ReductionResult:
    new_start: Configuration
    pi: Permutation
    spanning_tree: np.ndarray
    queue_ops: int


def _reduce_on_tree(tree: SpanningTree, start: Configuration, goal: Configuration) -> ReductionResult:
    if start.p != goal.p:
        raise PebbleError(ErrorCode.PEBBLE_MISMATCH, "start and goal differ in size")
    new_pos, ops = _kernels.pmt_to_ppt(tree.order, tree.parent, start.positions, goal.positions)
    new_start = Configuration(new_pos, start.n, check=False)
    pi = new_start.occupant[goal.positions]
    return ReductionResult(new_start, Permutation(pi, check=False), tree.edge_ids, int(ops))


def pmt_to_ppt(tree: Graph, start: Any, goal: Any) -> ReductionResult:
    """Move the start onto the goal's vertex set inside a tree.

    The returned permutation satisfies ``goal[i] == new_start[pi[i]]``.
    """
    if not tree.is_tree():
        raise PebbleError(ErrorCode.NOT_A_TREE, f"{tree.m} edges on {tree.n} vertices")
    inst = PmgInstance(tree, start, goal)
    return _reduce_on_tree(bfs_tree(tree), inst.start, inst.goal)


def reduce_instance(instance: PmgInstance, analysis: GraphAnalysis | None = None) -> ReductionResult:
    """Reduction along the BFS spanning tree rooted at vertex 0."""
    if analysis is None:
        analysis = GraphAnalysis(instance.graph)
    return _reduce_on_tree(analysis.spanning_tree, instance.start, instance.goal)


def pmg_to_ppg(instance: PmgInstance, analysis: GraphAnalysis | None = None) -> PpgInstance:
    r = reduce_instance(instance, analysis)
    return PpgInstance(instance.graph, r.new_start, r.pi)


def reposition(
    instance: PpgInstance, target: Any, analysis: GraphAnalysis | None = None
) -> PpgInstance:
    """Relocate the start onto ``target`` (a vertex set) keeping ``pi`` unchanged.

    The result is reachable from the original start, so the permutation
    question is unaffected.
    """
    g = instance.graph
    if isinstance(target, (set, frozenset)):
        target = sorted(target)
    raw = np.asarray(target, dtype=np.int64).reshape(-1)
    tgt = np.unique(raw)
    if tgt.shape[0] != instance.p or raw.shape[0] != instance.p:
        raise PebbleError(ErrorCode.BAD_TARGET_SIZE, f"need {instance.p} distinct vertices")
    if tgt.size and (tgt[0] < 0 or tgt[-1] >= g.n):
        raise PebbleError(ErrorCode.BAD_VERTEX, "target vertex out of range")
    if analysis is None:
        analysis = GraphAnalysis(g)
    goal = Configuration(tgt, g.n, check=False)
    r = _reduce_on_tree(analysis.spanning_tree, instance.start, goal)
    # pebble i keeps its label and now sits at r.new_start.positions[i]
    return PpgInstance(g, r.new_start, instance.pi)
