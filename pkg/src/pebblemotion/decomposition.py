"""Bridges, 2-edge-connected components, blocks and graph classification."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .graph import Graph

NONE = -1

# hexagon 0..5 plus vertex 6 joined to the antipodal pair 0, 3
THETA0_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 6), (3, 6))


class GraphTag(str, enum.Enum):
    TREE = "TREE"
    CYCLE = "CYCLE"
    THETA0 = "THETA0"
    TWO_CONNECTED = "TWO_CONNECTED"
    TWO_EDGE_CONNECTED_SEPARABLE = "TWO_EDGE_CONNECTED_SEPARABLE"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class GraphClass:
    tag: GraphTag
    bipartite: bool


@dataclass(frozen=True, eq=False)
class BiconnectedComponents:
    edge_labels: np.ndarray
    articulation: np.ndarray
    count: int


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Structural summary of a connected graph.

    ``mtec_id`` is ``NONE`` for vertices touching only bridges. The
    component tree has one node per MTEC (ids ``0..k-1``) followed by one
    node per vertex outside every MTEC, in vertex order.
    """

    graph: Graph
    bridge_flags: np.ndarray
    mtec_id: np.ndarray
    mtec_sizes: np.ndarray
    n_m: int
    articulation: np.ndarray
    bicomp_id: np.ndarray
    n_bicomps: int

    @property
    def n_mtecs(self) -> int:
        return int(self.mtec_sizes.shape[0])

    @cached_property
    def component_node(self) -> np.ndarray:
        """Component-tree node of every vertex."""
        k = self.n_mtecs
        outside = self.mtec_id == NONE
        node = self.mtec_id.copy()
        node[outside] = k + np.arange(int(outside.sum()))
        return node

    @cached_property
    def component_tree(self) -> Graph:
        node = self.component_node
        bridges = self.graph.edges[self.bridge_flags]
        n_nodes = int(node.max()) + 1 if node.size else 0
        return Graph(n_nodes, node[bridges], check=False)

    def mtec_members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.mtec_id == k)


def biconnected_components(g: Graph) -> BiconnectedComponents:
    _, block, art, count, _, _ = _kernels.lowlink(g.indptr, g.indices, g.edge_ids, g.m)
    return BiconnectedComponents(block, art, int(count))


def decompose(g: Graph) -> Decomposition:
    is_bridge, block, art, n_blocks, comp, _ = _kernels.lowlink(g.indptr, g.indices, g.edge_ids, g.m)
    sizes = np.bincount(comp)
    is_mtec = sizes >= 2
    rank = np.cumsum(is_mtec) - 1
    mtec_id = np.where(is_mtec[comp], rank[comp], NONE)
    mtec_sizes = sizes[is_mtec]
    return Decomposition(
        graph=g,
        bridge_flags=is_bridge,
        mtec_id=mtec_id,
        mtec_sizes=mtec_sizes,
        n_m=int(mtec_sizes.sum()),
        articulation=art,
        bicomp_id=block,
        n_bicomps=int(n_blocks),
    )


def two_coloring(g: Graph, dist: np.ndarray | None = None) -> tuple[np.ndarray, bool]:
    """BFS depth parity per vertex and whether it is a proper 2-coloring."""
    if dist is None:
        _, _, _, dist = _kernels.bfs(g.indptr, g.indices, g.edge_ids, np.zeros(1, np.int64))
    color = dist & 1
    bipartite = bool(np.all(color[g.edges[:, 0]] != color[g.edges[:, 1]])) if g.m else True
    return color, bipartite


def _theta0_local(n: int, edges: np.ndarray) -> bool:
    if n != 7 or edges.shape[0] != 8:
        return False
    deg = np.bincount(edges.ravel(), minlength=7)
    if sorted(deg.tolist()) != [2, 2, 2, 2, 2, 3, 3]:
        return False
    present = {(int(a), int(b)) for a, b in edges} | {(int(b), int(a)) for a, b in edges}
    # brute force over all 7! relabelings; constant work
    for perm in itertools.permutations(range(7)):
        if all((perm[a], perm[b]) in present for a, b in THETA0_EDGES):
            return True
    return False


def theta0_check(g: Graph) -> bool:
    """True iff ``g`` is isomorphic to the 7-vertex theta-zero graph."""
    return _theta0_local(g.n, g.edges)


def classify(g: Graph, d: Decomposition | None = None, bipartite: bool | None = None) -> GraphClass:
    if d is None:
        d = decompose(g)
    if bipartite is None:
        _, bipartite = two_coloring(g)
    if g.m == g.n - 1:
        tag = GraphTag.TREE
    elif np.all(g.degree == 2):
        tag = GraphTag.CYCLE
    elif theta0_check(g):
        tag = GraphTag.THETA0
    elif not d.articulation.any():
        tag = GraphTag.TWO_CONNECTED
    elif not d.bridge_flags.any():
        tag = GraphTag.TWO_EDGE_CONNECTED_SEPARABLE
    else:
        tag = GraphTag.GENERAL
    return GraphClass(tag, bipartite)


class BlockKind(enum.IntEnum):
    BRIDGE = 0
    CYCLE = 1
    THETA0 = 2
    BIPARTITE = 3
    FREE = 4


class SpanningTree:
    """BFS tree from vertex 0: ``order``, ``parent`` and the graph edge ids used."""

    def __init__(self, graph: Graph, order: np.ndarray, parent: np.ndarray, parent_edge: np.ndarray):
        self.graph = graph
        self.order = order
        self.parent = parent
        self.edge_ids = np.sort(parent_edge[parent_edge >= 0])

    @cached_property
    def tree(self) -> Graph:
        g = self.graph
        if self.edge_ids.shape[0] == g.m:
            return g
        return Graph(g.n, g.edges[self.edge_ids], check=False)


def bfs_tree(graph: Graph) -> SpanningTree:
    order, parent, parent_edge, _ = _kernels.bfs(graph.indptr, graph.indices, graph.edge_ids, np.zeros(1, np.int64))
    return SpanningTree(graph, order, parent, parent_edge)


class GraphAnalysis:
    """Per-graph structure shared by every instance on the same graph.

    Only the decomposition and classification are computed eagerly; block
    tables, cycle orders and the spanning tree are built on first use.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.decomposition = decompose(graph)
        self._bfs = _kernels.bfs(graph.indptr, graph.indices, graph.edge_ids, np.zeros(1, np.int64))
        self.color, bipartite = two_coloring(graph, self._bfs[3])
        self.graph_class = classify(graph, self.decomposition, bipartite)
        self.cache: dict[str, object] = {}

    @property
    def tag(self) -> GraphTag:
        return self.graph_class.tag

    @cached_property
    def spanning_tree(self) -> SpanningTree:
        order, parent, parent_edge, _ = self._bfs
        return SpanningTree(self.graph, order, parent, parent_edge)

    @cached_property
    def cycle_order(self) -> np.ndarray:
        """Vertices around the cycle starting at 0 (CYCLE graphs only)."""
        adj = self.graph.adjacency
        seq = [0]
        prev, cur = -1, 0
        for _ in range(self.graph.n - 1):
            a, b = adj[cur]
            nxt = b if a == prev else a
            seq.append(nxt)
            prev, cur = cur, nxt
        return np.array(seq, dtype=np.int64)

    @cached_property
    def blocks(self) -> BlockTable:
        return BlockTable(self)


class BlockTable:
    """Kind, size and (for cycles) cyclic vertex order of every block."""

    def __init__(self, analysis: GraphAnalysis):
        g = analysis.graph
        d = analysis.decomposition
        nb = d.n_bicomps
        label = d.bicomp_id
        self.edge_block = label
        self.n_blocks = nb
        self.edge_count = np.bincount(label, minlength=nb)
        pairs = np.unique(np.concatenate([label * g.n + g.edges[:, 0], label * g.n + g.edges[:, 1]]))
        self.vertex_count = np.bincount(pairs // g.n, minlength=nb)
        same = analysis.color[g.edges[:, 0]] == analysis.color[g.edges[:, 1]]
        odd = np.zeros(nb, dtype=np.bool_)
        odd[label[same]] = True
        kind = np.full(nb, BlockKind.FREE, dtype=np.int64)
        kind[~odd] = BlockKind.BIPARTITE
        kind[self.edge_count == self.vertex_count] = BlockKind.CYCLE
        kind[self.edge_count == 1] = BlockKind.BRIDGE
        self.theta0_blocks: dict[int, tuple[np.ndarray, tuple[tuple[int, ...], ...]]] = {}
        for b in np.flatnonzero((self.vertex_count == 7) & (self.edge_count == 8)).tolist():
            e = g.edges[label == b]
            verts = np.unique(e)
            local = np.searchsorted(verts, e)
            if _theta0_local(7, local):
                kind[b] = BlockKind.THETA0
                adj: list[list[int]] = [[] for _ in range(7)]
                for a, c in local.tolist():
                    adj[a].append(c)
                    adj[c].append(a)
                self.theta0_blocks[b] = (verts, tuple(tuple(sorted(x)) for x in adj))
        self.kind = kind
        self.cycle_ptr, self.cycle_verts = _kernels.cycle_block_orders(
            g.edges, label, kind == BlockKind.CYCLE, nb, g.n
        )

    def cycle_order(self, b: int) -> np.ndarray:
        """Vertices of cycle block ``b`` in cyclic order."""
        return self.cycle_verts[self.cycle_ptr[b] : self.cycle_ptr[b + 1]]


def analyze(graph: Graph) -> GraphAnalysis:
    return GraphAnalysis(graph)
