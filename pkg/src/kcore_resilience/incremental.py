"""Single-edge core maintenance.

Removal uses a traversal from the endpoints whose core equals
``K = min(K(u), K(v))``: a node is evicted from the K-core once it has fewer
than K surviving neighbors of core >= K, and only evicted nodes' same-shell
neighbors are ever inspected.

Insertion uses the subcore method: the candidate region is the subcore(s) of
the endpoint(s) with core K, optionally read from a precomputed subcore
index instead of being rebuilt by BFS.  Region nodes that keep more than K
supporters (neighbors with core > K or surviving region nodes) rise to K+1.

Both rely on the standard locality result for single-edge changes: only
nodes with core K can change, and by exactly one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from .cores import CoreState, core_decompose
from .errors import InvalidChangeError
from .graph import Edge, Graph, edge_key


@dataclass(frozen=True)
class EdgeChange:
    kind: Literal["insert", "remove"]
    endpoints: Edge

    def __post_init__(self):
        if self.kind not in ("insert", "remove"):
            raise InvalidChangeError(f"unknown change kind {self.kind!r}")
        u, v = self.endpoints
        if u == v:
            raise InvalidChangeError(f"self-loop ({u}, {v})")
        object.__setattr__(self, "endpoints", edge_key(u, v))

    @classmethod
    def insert(cls, u, v):
        return cls("insert", (u, v))

    @classmethod
    def remove(cls, u, v):
        return cls("remove", (u, v))

    def validate(self, g: Graph) -> None:
        u, v = self.endpoints
        for x in (u, v):
            if not 0 <= x < g.n:
                raise InvalidChangeError(f"node {x} not in graph")
        present = g.has_edge(u, v)
        if self.kind == "remove" and not present:
            raise InvalidChangeError(f"cannot remove ({u}, {v}): not an edge")
        if self.kind == "insert" and present:
            raise InvalidChangeError(f"cannot insert ({u}, {v}): already an edge")

    def apply(self, g: Graph) -> None:
        """Apply in place to ``g``."""
        if self.kind == "remove":
            g.remove_edge(*self.endpoints)
        else:
            g.add_edge(*self.endpoints)


class ChangeReport:
    """Core numbers that moved after one edge change.

    ``changed`` is a sorted tuple of ``(node, old_core, new_core)``.
    ``updated_core`` is materialized on first access (it copies the graph).
    """

    def __init__(self, base: CoreState, change: EdgeChange, changed):
        self.base = base
        self.change = change
        self.changed = tuple(sorted(changed))

    def __repr__(self):
        return f"ChangeReport({self.change.kind} {self.change.endpoints}, changed={list(self.changed)})"

    def __eq__(self, other):
        if not isinstance(other, ChangeReport):
            return NotImplemented
        return self.change == other.change and self.changed == other.changed

    @property
    def changed_nodes(self) -> frozenset[int]:
        return frozenset(x for x, _, _ in self.changed)

    def as_dict(self) -> dict[int, tuple[int, int]]:
        return {x: (a, b) for x, a, b in self.changed}

    def new_core_array(self) -> np.ndarray:
        core = self.base.core.copy()
        for x, _, new in self.changed:
            core[x] = new
        return core

    @cached_property
    def updated_core(self) -> CoreState:
        g = self.base.graph.copy()
        self.change.apply(g)
        return CoreState(self.new_core_array(), g)


def core_list(cs) -> list[int]:
    if isinstance(cs, CoreState):
        # cached on the instance: tolist() per call would make updates O(n)
        lst = cs.__dict__.get("_core_list")
        if lst is None:
            lst = cs.core.tolist()
            cs.__dict__["_core_list"] = lst
        return lst
    return list(cs)


# --- workers over raw (adj, core) ----------------------------------------


def _removal_evictions(adj, core, u, v, virtual: bool) -> list[int]:
    """Nodes whose core drops when (u, v) is removed.

    ``virtual=True`` means ``adj`` still contains the edge and it must be
    skipped; otherwise it has already been deleted from ``adj``.
    """
    k = min(core[u], core[v])
    skip_u, skip_v = (u, v) if virtual else (-1, -1)

    def nbrs(w):
        if w == skip_u:
            return (x for x in adj[w] if x != skip_v)
        if w == skip_v:
            return (x for x in adj[w] if x != skip_u)
        return adj[w]

    evicted: set[int] = set()
    mcd: dict[int, int] = {}

    def support(w):
        return sum(1 for x in nbrs(w) if core[x] >= k and x not in evicted)

    stack = [x for x in (u, v) if core[x] == k]
    for r in stack:
        mcd[r] = support(r)
    while stack:
        w = stack.pop()
        if w in evicted or mcd[w] >= k:
            continue
        evicted.add(w)
        for x in nbrs(w):
            if core[x] != k or x in evicted:
                continue
            if x in mcd:
                mcd[x] -= 1
            else:
                mcd[x] = support(x)
            stack.append(x)
    return sorted(evicted)


def _bfs_subcore(adj, core, roots, extra: Edge | None) -> set[int]:
    k = core[roots[0]]
    seen = set(roots)
    queue = deque(roots)
    eu, ev = extra if extra else (-1, -1)
    while queue:
        w = queue.popleft()
        for x in adj[w]:
            if x not in seen and core[x] == k:
                seen.add(x)
                queue.append(x)
        if w == eu and ev not in seen and core[ev] == k:
            seen.add(ev)
            queue.append(ev)
        elif w == ev and eu not in seen and core[eu] == k:
            seen.add(eu)
            queue.append(eu)
    return seen


def _insertion_promotions(adj, core, u, v, virtual: bool, subcore_of=None) -> list[int]:
    """Nodes whose core rises when (u, v) is inserted.

    ``virtual=True`` means ``adj`` does not yet contain the edge.
    ``subcore_of`` maps a node to its (pre-insertion) subcore member set.
    """
    k = min(core[u], core[v])
    roots = [x for x in (u, v) if core[x] == k]
    if subcore_of is not None:
        region = set(subcore_of(roots[0]))
        if len(roots) == 2 and roots[1] not in region:
            region |= subcore_of(roots[1])
    else:
        region = _bfs_subcore(adj, core, roots, (u, v) if virtual else None)

    def nbrs(w):
        if virtual and w == u:
            yield v
        elif virtual and w == v:
            yield u
        yield from adj[w]

    cd = {}
    for w in region:
        cd[w] = sum(1 for x in nbrs(w) if core[x] > k or x in region)
    stack = [w for w in region if cd[w] <= k]
    evicted = set()
    while stack:
        w = stack.pop()
        if w in evicted:
            continue
        evicted.add(w)
        for x in nbrs(w):
            if x in region and x not in evicted:
                cd[x] -= 1
                if cd[x] <= k:
                    stack.append(x)
    return sorted(region - evicted)


# --- public API --------------------------------------------------------------


def recompute_oracle(g: Graph, change: EdgeChange) -> ChangeReport:
    """Ground truth: apply the change to a copy and peel from scratch."""
    change.validate(g)
    base = core_decompose(g)
    h = g.copy()
    change.apply(h)
    after = core_decompose(h)
    diff = np.nonzero(base.core != after.core)[0]
    changed = [(int(x), int(base.core[x]), int(after.core[x])) for x in diff]
    return ChangeReport(base, change, changed)


def remove_edge_update(g: Graph, cs: CoreState, e) -> ChangeReport:
    change = EdgeChange.remove(*e)
    change.validate(g)
    u, v = change.endpoints
    core = core_list(cs)
    dropped = _removal_evictions(g.adj, core, u, v, virtual=True)
    return ChangeReport(cs, change, [(x, core[x], core[x] - 1) for x in dropped])


def insert_edge_update(g: Graph, cs: CoreState, e, precomputed_subcores=None) -> ChangeReport:
    """Core changes caused by inserting ``e``.

    ``precomputed_subcores`` may be a :class:`CoreState` (its cached subcore
    index is used) or any callable mapping a node to its subcore member set.
    It must describe ``g`` before the insertion.
    """
    change = EdgeChange.insert(*e)
    change.validate(g)
    u, v = change.endpoints
    core = core_list(cs)
    lookup = precomputed_subcores
    if isinstance(lookup, CoreState):
        lookup = lookup.subcore_of
    raised = _insertion_promotions(g.adj, core, u, v, virtual=True, subcore_of=lookup)
    return ChangeReport(cs, change, [(x, core[x], core[x] + 1) for x in raised])


def apply_update(g: Graph, cs: CoreState, change: EdgeChange) -> ChangeReport:
    if change.kind == "remove":
        return remove_edge_update(g, cs, change.endpoints)
    return insert_edge_update(g, cs, change.endpoints)


class DynamicCores:
    """A private graph copy whose core numbers are maintained across a
    sequence of applied changes.

    Subcores are cached per shell and dropped for every shell an applied
    change touches.
    """

    def __init__(self, g: Graph, cs: CoreState | None = None):
        self.graph = g.copy()
        self.core = list(core_list(cs)) if cs is not None else core_decompose(g).core.tolist()
        self._subcores: dict[int, dict[int, frozenset[int]]] = {}

    def core_state(self) -> CoreState:
        return CoreState(self.core, self.graph.copy())

    def _shell_subcores(self, k):
        cache = self._subcores.get(k)
        if cache is None:
            cache = {}
            adj, core = self.graph.adj, self.core
            for s in range(len(core)):
                if core[s] == k and s not in cache:
                    members = frozenset(_bfs_subcore(adj, core, [s], None))
                    for x in members:
                        cache[x] = members
            self._subcores[k] = cache
        return cache

    def subcore_of(self, u: int) -> frozenset[int]:
        return self._shell_subcores(self.core[u])[u]

    def remove(self, u: int, v: int) -> list[tuple[int, int, int]]:
        self.graph.remove_edge(u, v)
        core = self.core
        k = min(core[u], core[v])
        dropped = _removal_evictions(self.graph.adj, core, u, v, virtual=False)
        for x in dropped:
            core[x] -= 1
        self._invalidate(k, k - 1)
        return [(x, k, k - 1) for x in dropped]

    def insert(self, u: int, v: int) -> list[tuple[int, int, int]]:
        core = self.core
        k = min(core[u], core[v])
        raised = _insertion_promotions(self.graph.adj, core, u, v, virtual=True, subcore_of=self.subcore_of)
        self.graph.add_edge(u, v)
        for x in raised:
            core[x] += 1
        self._invalidate(k, k + 1)
        return [(x, k, k + 1) for x in raised]

    def apply(self, change: EdgeChange) -> list[tuple[int, int, int]]:
        change.validate(self.graph)
        if change.kind == "remove":
            return self.remove(*change.endpoints)
        return self.insert(*change.endpoints)

    def _invalidate(self, *shells):
        for k in shells:
            self._subcores.pop(k, None)
