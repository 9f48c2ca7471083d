"""Core decomposition and the static neighborhood queries built on it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import EmptyGraphError
from .graph import Graph


class CoreState:
    """Core numbers of a graph with lazily derived shell and subcore indices.

    ``core`` is a read-only integer array.  A *subcore* is a connected
    component of the subgraph induced by nodes sharing one core number;
    ``subcore_id[u] == subcore_id[v]`` iff ``u`` and ``v`` are in the same one.
    """

    def __init__(self, core, graph: Graph):
        core = np.array(core, dtype=np.int64)
        core.setflags(write=False)
        self.core = core
        self.graph = graph

    def __len__(self):
        return len(self.core)

    def __getitem__(self, u):
        return int(self.core[u])

    def __eq__(self, other):
        if not isinstance(other, CoreState):
            return NotImplemented
        return np.array_equal(self.core, other.core)

    def __repr__(self):
        kmax = int(self.core.max()) if len(self.core) else 0
        return f"CoreState(n={len(self.core)}, max_core={kmax})"

    @property
    def max_core(self) -> int:
        return int(self.core.max()) if len(self.core) else 0

    @cached_property
    def shell_index(self) -> dict[int, frozenset[int]]:
        shells: dict[int, set[int]] = {}
        for u, k in enumerate(self.core.tolist()):
            shells.setdefault(k, set()).add(u)
        return {k: frozenset(s) for k, s in sorted(shells.items())}

    @cached_property
    def subcore_id(self) -> np.ndarray:
        core = self.core.tolist()
        adj = self.graph.adj
        sid = [-1] * len(core)
        nxt = 0
        for s in range(len(core)):
            if sid[s] >= 0:
                continue
            k = core[s]
            sid[s] = nxt
            queue = deque([s])
            while queue:
                w = queue.popleft()
                for x in adj[w]:
                    if sid[x] < 0 and core[x] == k:
                        sid[x] = nxt
                        queue.append(x)
            nxt += 1
        arr = np.array(sid, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def subcores(self) -> dict[int, frozenset[int]]:
        """Subcore id -> member set."""
        groups: dict[int, set[int]] = {}
        for u, s in enumerate(self.subcore_id.tolist()):
            groups.setdefault(s, set()).add(u)
        return {s: frozenset(m) for s, m in groups.items()}

    def subcore_of(self, u: int) -> frozenset[int]:
        return self.subcores[int(self.subcore_id[u])]


def peel(g: Graph) -> list[int]:
    """Batagelj-Zaversnik bucket peeling; O(|V| + |E|)."""
    n = g.n
    if n == 0:
        return []
    deg = [len(a) for a in g.adj]
    md = max(deg)
    bin_ = [0] * (md + 1)
    for d in deg:
        bin_[d] += 1
    start = 0
    for d in range(md + 1):
        bin_[d], start = start, start + bin_[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bin_[deg[v]]
        vert[pos[v]] = v
        bin_[deg[v]] += 1
    for d in range(md, 0, -1):
        bin_[d] = bin_[d - 1]
    bin_[0] = 0
    adj = g.adj
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for u in adj[v]:
            du = deg[u]
            if du > dv:
                pw = bin_[du]
                w = vert[pw]
                pu = pos[u]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bin_[du] += 1
                deg[u] = du - 1
    return deg


def core_decompose(g: Graph) -> CoreState:
    return CoreState(peel(g), g)


def h_index(values) -> int:
    """Largest h such that at least h of ``values`` are >= h."""
    vals = sorted(values, reverse=True)
    h = 0
    for i, x in enumerate(vals, start=1):
        if x >= i:
            h = i
        else:
            break
    return h


def h_index_check(g: Graph, cs) -> bool:
    """True iff every core number equals the h-index of its neighbors' core numbers."""
    core = cs.core if isinstance(cs, CoreState) else np.asarray(cs)
    if len(core) != g.n:
        return False
    return all(core[u] == h_index(core[v] for v in g.adj[u]) for u in g.nodes())


@dataclass(frozen=True)
class DeltaPartition:
    """Neighbors of each node split by core number relative to the node's own."""

    lt: list[list[int]]
    eq: list[list[int]]
    gt: list[list[int]]

    @cached_property
    def lt_count(self) -> np.ndarray:
        return np.array([len(x) for x in self.lt], dtype=np.int64)

    @cached_property
    def eq_count(self) -> np.ndarray:
        return np.array([len(x) for x in self.eq], dtype=np.int64)

    @cached_property
    def gt_count(self) -> np.ndarray:
        return np.array([len(x) for x in self.gt], dtype=np.int64)

    @cached_property
    def geq_count(self) -> np.ndarray:
        return self.eq_count + self.gt_count

    def geq(self, u: int) -> list[int]:
        return self.eq[u] + self.gt[u]


def delta_partition(g: Graph, cs: CoreState) -> DeltaPartition:
    core = cs.core.tolist()
    lt, eq, gt = [], [], []
    for u in g.nodes():
        k = core[u]
        a, b, c = [], [], []
        for v in sorted(g.adj[u]):
            kv = core[v]
            (a if kv < k else b if kv == k else c).append(v)
        lt.append(a)
        eq.append(b)
        gt.append(c)
    return DeltaPartition(lt, eq, gt)


def count_geq(g: Graph, core) -> list[int]:
    """|Δ≥(u)| for every node, without building member lists."""
    return [sum(1 for v in g.adj[u] if core[v] >= core[u]) for u in g.nodes()]


def count_gt(g: Graph, core) -> list[int]:
    """|Δ>(u)| for every node."""
    return [sum(1 for v in g.adj[u] if core[v] > core[u]) for u in g.nodes()]


def distance2_neighbors(g: Graph, u: int) -> set[int]:
    """Nodes sharing a neighbor with ``u`` that are not adjacent to it."""
    nbrs = g.neighbors(u)
    out = set()
    for w in nbrs:
        out.update(g.adj[w])
    out -= nbrs
    out.discard(u)
    return out


def degree_moments(g: Graph) -> tuple[float, float, float]:
    """(<k>, <k^2>, <k>/<k^2>) of the degree distribution."""
    if g.n == 0:
        raise EmptyGraphError("degree moments of an empty graph")
    d = np.array(g.degrees(), dtype=float)
    k1 = float(d.mean())
    k2 = float((d * d).mean())
    return k1, k2, (k1 / k2 if k2 > 0 else float("inf"))
