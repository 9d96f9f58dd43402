"""Top-level feasibility decision."""

from __future__ import annotations

import time
from typing import Any, Sequence

import numpy as np

from . import _kernels
from .contraction import contract_arrays, prepare_occupancy
from .decomposition import GraphAnalysis, GraphTag, analyze
from .equivalence import EquivalenceClasses, labels_admit, tree_class_labels
from .graph import Graph, PmgInstance, PpgInstance, connected_components
from .reduction import reduce_instance
from .special import (
    RuleTag,
    decide_cycle,
    decide_theta0,
    nm_minus_3_applies,
    one_hole_restrictions,
    parity_normalized,
)

__all__ = ["FeasibilityReport", "GraphAnalysis", "analyze", "decide", "decide_multi", "decide_split"]


class FeasibilityReport:
    """Verdict, the rule that produced it and, for tree-based rules, the classes.

    Classes are built from raw labels on first access, keeping bulk
    decisions cheap.
    """

    def __init__(
        self,
        feasible: bool,
        rule: RuleTag,
        classes: EquivalenceClasses | None = None,
        timings: dict[str, float] | None = None,
        components: list[FeasibilityReport] | None = None,
        *,
        labels: np.ndarray | None = None,
    ):
        self.feasible = feasible
        self.rule = rule
        self.timings = {} if timings is None else timings
        self.components = [] if components is None else components
        self._classes = classes
        self._labels = labels

    @property
    def classes(self) -> EquivalenceClasses | None:
        if self._classes is None and self._labels is not None:
            self._classes = EquivalenceClasses.from_labels(self._labels)
        return self._classes

    def to_json(self) -> dict[str, Any]:
        classes = self.classes
        out: dict[str, Any] = {
            "feasible": self.feasible,
            "rule": self.rule.value,
            "classes": None if classes is None else [list(c) for c in classes.classes],
            "timings_us": {k: round(v * 1e6, 3) for k, v in self.timings.items()},
        }
        if self.components:
            out["components"] = [c.to_json() for c in self.components]
        return out

    def __repr__(self) -> str:
        return f"FeasibilityReport(feasible={self.feasible}, rule={self.rule.value})"


def decide(instance: PmgInstance, analysis: GraphAnalysis | None = None) -> FeasibilityReport:
    """Decide whether ``instance.goal`` is reachable from ``instance.start``.

    ``analysis`` may be shared across instances on the same graph; when it
    is supplied the decompose phase costs nothing.
    """
    clock = time.perf_counter
    t0 = clock()
    if analysis is None:
        analysis = analyze(instance.graph)
    t1 = clock()
    g = instance.graph
    n, p = g.n, instance.p
    timings = {"decompose": t1 - t0, "reduce": 0.0, "decide": 0.0}

    if p == n:
        ok = instance.start == instance.goal
        timings["decide"] = clock() - t1
        return FeasibilityReport(ok, RuleTag.FULL_OCCUPANCY, timings=timings)

    red = reduce_instance(instance, analysis)
    ppg = PpgInstance(g, red.new_start, red.pi)
    t2 = clock()
    timings["reduce"] = t2 - t1

    tag = analysis.tag
    labels = None
    if tag is GraphTag.TREE:
        rule = RuleTag.TREE_DIRECT
        labels = tree_class_labels(g, ppg.start)
        ok = labels_admit(labels, red.pi.image)
    elif tag is GraphTag.CYCLE:
        rule = RuleTag.CYCLE_ROTATION
        ok = decide_cycle(ppg, analysis)
    elif tag is GraphTag.THETA0:
        rule = RuleTag.THETA0_ENUM
        ok = decide_theta0(ppg)
    elif tag is GraphTag.TWO_CONNECTED:
        if p <= n - 2 or not analysis.graph_class.bipartite:
            rule, ok = RuleTag.TWO_CONN_ALWAYS, True
        else:
            rule = RuleTag.TWO_CONN_PARITY
            ok = parity_normalized(ppg, analysis=analysis) == 0
    elif tag is GraphTag.TWO_EDGE_CONNECTED_SEPARABLE:
        rule = RuleTag.TEC_SEPARABLE
        ok = p <= n - 2 or one_hole_restrictions(ppg, analysis)
    elif p == n - 1:
        rule = RuleTag.N_MINUS_1
        ok = one_hole_restrictions(ppg, analysis)
    elif nm_minus_3_applies(p, analysis):
        rule, ok = RuleTag.NM_MINUS_3, True
    else:
        rule = RuleTag.CONTRACTION_TREE
        prepared = prepare_occupancy(ppg, analysis)
        plan, tree_occ, group_of, n_groups = contract_arrays(prepared.start, analysis)
        tree_labels = _kernels.tree_class_labels(plan.tree.indptr, plan.tree.indices, tree_occ, n_groups)
        # label -1 marks a singleton tree pebble; give each its own key
        key = np.where(tree_labels >= 0, tree_labels, plan.tree.n + np.arange(n_groups))
        labels = key[group_of]
        ok = labels_admit(labels, red.pi.image)
    timings["decide"] = clock() - t2
    return FeasibilityReport(bool(ok), rule, timings=timings, labels=labels)


def decide_multi(fragments: Sequence[PmgInstance]) -> FeasibilityReport:
    """Conjunction over independent connected components."""
    reports = [decide(f) for f in fragments]
    bad = next((r for r in reports if not r.feasible), None)
    rule = bad.rule if bad is not None else (reports[-1].rule if reports else RuleTag.FULL_OCCUPANCY)
    timings: dict[str, float] = {}
    for r in reports:
        for k, v in r.timings.items():
            timings[k] = timings.get(k, 0.0) + v
    return FeasibilityReport(bad is None, rule, timings=timings, components=reports)


def decide_split(n: int, edges: Any, start: Sequence[int], goal: Sequence[int]) -> FeasibilityReport:
    """Decide an instance on a possibly disconnected graph.

    Pebbles cannot cross components, so each one is decided separately.
    """
    e = Graph(n, edges, connected=False).edges
    comp = connected_components(n, e)
    s = np.asarray(start, dtype=np.int64)
    d = np.asarray(goal, dtype=np.int64)
    # validate the whole configuration before splitting
    PmgInstance(Graph(n, e, check=False), s, d)
    if not np.array_equal(comp[s], comp[d]):
        return FeasibilityReport(False, RuleTag.COMPONENT_MISMATCH)
    fragments = []
    for c in range(int(comp.max()) + 1 if n else 0):
        verts = np.flatnonzero(comp == c)
        local = np.full(n, -1, dtype=np.int64)
        local[verts] = np.arange(verts.shape[0])
        ce = e[comp[e[:, 0]] == c] if e.size else e
        peb = np.flatnonzero(comp[s] == c)
        g = Graph(verts.shape[0], local[ce], check=False)
        fragments.append(PmgInstance(g, local[s[peb]], local[d[peb]]))
    return decide_multi(fragments)
