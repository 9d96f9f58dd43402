"""Exchange classes of pebbles on trees."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable

import numpy as np

from . import _kernels
from .graph import Configuration, ErrorCode, Graph, PebbleError, Permutation


@dataclass(frozen=True, eq=False)
class EquivalenceClasses:
    """Partition of pebbles ``0..p-1``.

    Classes are listed by smallest member, members ascending, and
    ``class_id[i]`` indexes into ``classes``.
    """

    class_id: np.ndarray
    n_classes: int

    @classmethod
    def from_labels(cls, labels: Any) -> EquivalenceClasses:
        """Group pebbles by label; a negative label means a singleton."""
        lab = np.ascontiguousarray(labels, dtype=np.int64).reshape(-1)
        class_id, k = _kernels.canonical_labels(lab)
        class_id.setflags(write=False)
        return cls(class_id, int(k))

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        if self.n_classes == self.p:
            return tuple((i,) for i in range(self.p))
        order = np.argsort(self.class_id, kind="stable")
        bounds = np.flatnonzero(np.diff(self.class_id[order])) + 1
        return tuple(tuple(c.tolist()) for c in np.split(order, bounds))

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]], p: int) -> EquivalenceClasses:
        lab = np.full(p, -1, dtype=np.int64)
        for k, grp in enumerate(groups):
            lab[list(grp)] = k
        if (lab < 0).any():
            raise PebbleError(ErrorCode.BAD_PERMUTATION, "groups do not cover every pebble")
        return cls.from_labels(lab)

    @property
    def p(self) -> int:
        return self.class_id.shape[0]

    def same(self, i: int, j: int) -> bool:
        return bool(self.class_id[i] == self.class_id[j])

    def admits(self, pi: Permutation) -> bool:
        """Every pebble stays inside its class under ``pi``."""
        return bool(np.array_equal(self.class_id, self.class_id[pi.image]))

    def as_partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.classes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EquivalenceClasses):
            return NotImplemented
        return np.array_equal(self.class_id, other.class_id)

    def __hash__(self) -> int:
        return hash(self.class_id.tobytes())

    def __repr__(self) -> str:
        return f"EquivalenceClasses({[list(c) for c in self.classes]})"


def labels_admit(labels: np.ndarray, pi: np.ndarray) -> bool:
    """``pi`` keeps every pebble inside its class (negative label = singleton)."""
    key = np.where(labels >= 0, labels, -1 - np.arange(labels.shape[0]))
    return bool(np.array_equal(key, key[pi]))


def tree_class_labels(tree: Graph, start: Configuration) -> np.ndarray:
    """Raw class labels as produced by the kernel (no tree check)."""
    return _kernels.tree_class_labels(tree.indptr, tree.indices, start.occupant, start.p)


def tree_classes(tree: Graph, start: Any) -> EquivalenceClasses:
    """Partition pebbles on a tree into classes closed under exchange."""
    if not tree.is_tree():
        raise PebbleError(ErrorCode.NOT_A_TREE, f"{tree.m} edges on {tree.n} vertices")
    s = start if isinstance(start, Configuration) else Configuration(start, tree.n)
    return EquivalenceClasses.from_labels(tree_class_labels(tree, s))


def decide_ppt(tree: Graph, start: Any, pi: Any) -> bool:
    """Feasibility of a permutation instance on a tree."""
    perm = pi if isinstance(pi, Permutation) else Permutation(pi)
    return tree_classes(tree, start).admits(perm)
