"""Graph, configuration and instance model plus JSON I/O."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from . import _kernels

EMPTY = -1


class ErrorCode(str, enum.Enum):
    DUPLICATE_VERTEX = "DUPLICATE_VERTEX"
    DISCONNECTED = "DISCONNECTED"
    BAD_EDGE = "BAD_EDGE"
    BAD_VERTEX = "BAD_VERTEX"
    PEBBLE_MISMATCH = "PEBBLE_MISMATCH"
    BAD_PERMUTATION = "BAD_PERMUTATION"
    BAD_FORMAT = "BAD_FORMAT"
    OCCUPIED = "OCCUPIED"
    NOT_ADJACENT = "NOT_ADJACENT"
    BAD_PARAMS = "BAD_PARAMS"
    NOT_A_TREE = "NOT_A_TREE"
    BAD_TARGET_SIZE = "BAD_TARGET_SIZE"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    PRECONDITION = "PRECONDITION"
    OCCUPANCY_VIOLATION = "OCCUPANCY_VIOLATION"
    STATE_SPACE_TOO_LARGE = "STATE_SPACE_TOO_LARGE"


class PebbleError(ValueError):
    """Raised for invalid inputs; ``code`` says which contract was broken."""

    def __init__(self, code: ErrorCode, message: str = ""):
        super().__init__(f"{code.value}: {message}" if message else code.value)
        self.code = code


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _edge_array(edges: Any) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise PebbleError(ErrorCode.BAD_EDGE, "edges must be pairs")
    return arr


class Graph:
    """Undirected simple connected graph on vertices ``0..n-1``.

    Adjacency is stored in CSR form with sorted rows; ``edge_ids`` gives the
    edge index of every CSR slot. Instances are immutable.
    """

    def __init__(self, n: int, edges: Any, *, check: bool = True, connected: bool = True):
        n = int(n)
        arr = _edge_array(edges)
        if check:
            if n < 1:
                raise PebbleError(ErrorCode.BAD_PARAMS, "graph needs at least one vertex")
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise PebbleError(ErrorCode.BAD_EDGE, "edge endpoint out of range")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise PebbleError(ErrorCode.BAD_EDGE, "self-loop")
        arr = np.sort(arr, axis=1)
        if check and arr.shape[0] > 1:
            keys = arr[:, 0] * n + arr[:, 1]
            if np.unique(keys).shape[0] != keys.shape[0]:
                raise PebbleError(ErrorCode.BAD_EDGE, "duplicate edge")
        indptr, adj = _kernels.build_csr(n, arr)
        self.n = n
        self.edges = _frozen(arr)
        self.indptr = _frozen(indptr)
        self.indices = _frozen(adj[:, 0])
        self.edge_ids = _frozen(adj[:, 1])
        if check and connected and n > 1:
            order_, *_ = _kernels.bfs(self.indptr, self.indices, self.edge_ids, np.zeros(1, np.int64))
            if order_.shape[0] != n:
                raise PebbleError(ErrorCode.DISCONNECTED, "graph is not connected")

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    @cached_property
    def degree(self) -> np.ndarray:
        return _frozen(np.diff(self.indptr))

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor tuples, for pure-Python loops on small graphs."""
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return tuple(tuple(ind[ptr[v]:ptr[v + 1]]) for v in range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.shape[0] and row[k] == v)

    def is_tree(self) -> bool:
        return self.m == self.n - 1

    def edge_list(self) -> list[list[int]]:
        return self.edges.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices) and np.array_equal(
            self.indptr, other.indptr
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class Configuration:
    """Injective placement of pebbles ``0..p-1`` on vertices ``0..n-1``."""

    def __init__(self, positions: Any, n: int, *, check: bool = True):
        pos = np.array(positions, dtype=np.int64).reshape(-1)
        self.n = int(n)
        self.positions = _frozen(pos)
        if check:
            if pos.size and (pos.min() < 0 or pos.max() >= n):
                raise PebbleError(ErrorCode.BAD_VERTEX, "pebble position out of range")
            occ = self.occupant
            if np.count_nonzero(occ != EMPTY) != pos.shape[0]:
                raise PebbleError(ErrorCode.DUPLICATE_VERTEX, "two pebbles share a vertex")

    @property
    def p(self) -> int:
        return self.positions.shape[0]

    @cached_property
    def occupant(self) -> np.ndarray:
        """Pebble id per vertex, ``EMPTY`` where no pebble sits."""
        occ = np.full(self.n, EMPTY, dtype=np.int64)
        occ[self.positions] = np.arange(self.p)
        return _frozen(occ)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.positions.tolist())

    def key(self) -> tuple[int, ...]:
        return tuple(self.positions.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.positions, other.positions)

    def __hash__(self) -> int:
        return hash((self.n, self.key()))

    def __repr__(self) -> str:
        return f"Configuration({self.positions.tolist()}, n={self.n})"


class Permutation:
    """Bijection on pebble labels; ``image[i]`` is the pebble whose start is i's goal."""

    def __init__(self, image: Any, *, check: bool = True):
        img = np.array(image, dtype=np.int64).reshape(-1)
        if check and not np.array_equal(np.sort(img), np.arange(img.shape[0])):
            raise PebbleError(ErrorCode.BAD_PERMUTATION, "not a bijection")
        self.image = _frozen(img)

    @classmethod
    def identity(cls, p: int) -> Permutation:
        return cls(np.arange(p), check=False)

    @property
    def p(self) -> int:
        return self.image.shape[0]

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.image, np.arange(self.p)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.image, other.image)

    def __hash__(self) -> int:
        return hash(tuple(self.image.tolist()))

    def __repr__(self) -> str:
        return f"Permutation({self.image.tolist()})"


def _as_config(c: Any, n: int) -> Configuration:
    if isinstance(c, Configuration):
        if c.n != n:
            raise PebbleError(ErrorCode.BAD_VERTEX, "configuration built for another graph")
        return c
    return Configuration(c, n)


@dataclass(frozen=True, eq=False)
class PmgInstance:
    graph: Graph
    start: Configuration
    goal: Configuration

    def __init__(self, graph: Graph, start: Any, goal: Any):
        s = _as_config(start, graph.n)
        d = _as_config(goal, graph.n)
        if s.p != d.p:
            raise PebbleError(ErrorCode.PEBBLE_MISMATCH, f"{s.p} start pebbles vs {d.p} goal pebbles")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "goal", d)

    @property
    def p(self) -> int:
        return self.start.p

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.graph.n,
            "edges": self.graph.edge_list(),
            "start": self.start.positions.tolist(),
            "goal": self.goal.positions.tolist(),
        }


@dataclass(frozen=True, eq=False)
class PpgInstance:
    """Permutation instance: ``goal[i] = start[pi[i]]``."""

    graph: Graph
    start: Configuration
    pi: Permutation

    def __init__(self, graph: Graph, start: Any, pi: Any):
        s = _as_config(start, graph.n)
        perm = pi if isinstance(pi, Permutation) else Permutation(pi)
        if perm.p != s.p:
            raise PebbleError(ErrorCode.PEBBLE_MISMATCH, "permutation size differs from pebble count")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "pi", perm)

    @property
    def p(self) -> int:
        return self.start.p

    @cached_property
    def goal(self) -> Configuration:
        return Configuration(self.start.positions[self.pi.image], self.graph.n, check=False)

    def as_pmg(self) -> PmgInstance:
        return PmgInstance(self.graph, self.start, self.goal)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.graph.n,
            "edges": self.graph.edge_list(),
            "start": self.start.positions.tolist(),
            "pi": self.pi.image.tolist(),
            "goal": self.goal.positions.tolist(),
        }


def _int_list(raw: dict[str, Any], key: str) -> list[int]:
    value = raw.get(key)
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise PebbleError(ErrorCode.BAD_FORMAT, f"'{key}' must be a list of integers")
    return value


def parse_record(raw: Any) -> tuple[int, list[list[int]], list[int], list[int]]:
    """Syntactic checks on an instance record (dict or JSON text)."""
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise PebbleError(ErrorCode.BAD_FORMAT, str(exc)) from None
    if not isinstance(raw, dict):
        raise PebbleError(ErrorCode.BAD_FORMAT, "instance must be a JSON object")
    n = raw.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise PebbleError(ErrorCode.BAD_FORMAT, "'n' must be a positive integer")
    edges = raw.get("edges")
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        for e in edges
    ):
        raise PebbleError(ErrorCode.BAD_FORMAT, "'edges' must be a list of integer pairs")
    return n, edges, _int_list(raw, "start"), _int_list(raw, "goal")


def validate_instance(raw: Any) -> PmgInstance:
    """Build a :class:`PmgInstance` from a JSON record, enforcing every invariant."""
    n, edges, start, goal = parse_record(raw)
    if len(start) != len(goal):
        raise PebbleError(ErrorCode.PEBBLE_MISMATCH, f"{len(start)} start pebbles vs {len(goal)} goal pebbles")
    graph = Graph(n, edges)
    return PmgInstance(graph, start, goal)


def load_instance(path: str) -> PmgInstance:
    with open(path, encoding="utf-8") as fh:
        return validate_instance(fh.read())


def dump_instance(instance: PmgInstance) -> str:
    return json.dumps(instance.to_json())


def apply_move(c: Configuration, pebble: int, to: int, g: Graph) -> Configuration:
    """Move ``pebble`` to the empty neighbor ``to``."""
    if not 0 <= pebble < c.p:
        raise PebbleError(ErrorCode.BAD_PARAMS, f"no pebble {pebble}")
    if not 0 <= to < g.n:
        raise PebbleError(ErrorCode.BAD_VERTEX, f"no vertex {to}")
    here = int(c.positions[pebble])
    if not g.has_edge(here, to):
        raise PebbleError(ErrorCode.NOT_ADJACENT, f"{here} and {to} are not adjacent")
    if c.occupant[to] != EMPTY:
        raise PebbleError(ErrorCode.OCCUPIED, f"vertex {to} holds pebble {c.occupant[to]}")
    pos = c.positions.copy()
    pos[pebble] = to
    return Configuration(pos, c.n, check=False)


def connected_components(n: int, edges: Iterable[Sequence[int]]) -> np.ndarray:
    """Component label per vertex for a possibly disconnected edge list."""
    g = Graph(n, list(edges), check=False)
    labels, _ = _kernels.component_labels(g.indptr, g.indices, g.edge_ids, np.ones(max(g.m, 1), dtype=np.bool_))
    return labels
