"""Directed dependency graphs shared by the removal and insertion measures."""

from __future__ import annotations

import numpy as np


class DependencyGraph:
    """Directed graph over ``0..n-1``.

    An edge ``src -> dst`` means that changing the undirected edge
    ``(src, dst)`` moves the core number of ``dst``.
    """

    def __init__(self, n: int, edges=()):
        self.n = n
        self.succ: list[set[int]] = [set() for _ in range(n)]
        self.pred: list[set[int]] = [set() for _ in range(n)]
        for s, d in edges:
            self.add(s, d)

    def add(self, src: int, dst: int) -> None:
        self.succ[src].add(dst)
        self.pred[dst].add(src)

    def __contains__(self, edge):
        s, d = edge
        return d in self.succ[s]

    def __eq__(self, other):
        if not isinstance(other, DependencyGraph):
            return NotImplemented
        return self.n == other.n and self.succ == other.succ

    def __len__(self):
        return sum(len(s) for s in self.succ)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, edges={len(self)})"

    def edges(self) -> list[tuple[int, int]]:
        return [(s, d) for s in range(self.n) for d in sorted(self.succ[s])]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(s, d) for s in range(self.n) for d in self.succ[s]}

    def in_degree(self) -> np.ndarray:
        return np.array([len(p) for p in self.pred], dtype=np.int64)

    def out_degree(self) -> np.ndarray:
        return np.array([len(s) for s in self.succ], dtype=np.int64)


def reciprocal_in_degree(dep: DependencyGraph) -> np.ndarray:
    """1/deg^-(u), with ``inf`` where the in-degree is zero."""
    indeg = dep.in_degree().astype(float)
    with np.errstate(divide="ignore"):
        return np.where(indeg > 0, 1.0 / indeg, np.inf)
