"""Resilience of core numbers against single edge removals.

Vulnerable nodes (``K(u) == |Δ≥(u)|``) lose their core number when any
supporting edge goes.  Vulnerable nodes of equal core number that are
connected form a k-corona; the union of their sensitive edges (KAES) is the
only place where a removal changes anything, and every KAES edge yields the
same core vector.  So one incremental removal per corona is enough to build
the full removal dependency graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cores import CoreState, core_decompose, count_geq
from .dependency import DependencyGraph, reciprocal_in_degree
from .errors import ParameterError
from .graph import Edge, Graph, edge_key
from .incremental import core_list, remove_edge_update


@dataclass(frozen=True)
class Corona:
    k: int
    members: frozenset[int]
    kaes: tuple[Edge, ...]
    ccn: frozenset[int]

    @property
    def representative(self) -> Edge:
        return self.kaes[0]


@dataclass
class CoronaSet:
    coronas: list[Corona]
    vulnerable: frozenset[int]
    corona_of: dict[int, int] = field(repr=False)
    kaes_of: dict[Edge, int] = field(repr=False)
    removals_evaluated: int = 0

    def __len__(self):
        return len(self.coronas)

    def __iter__(self):
        return iter(self.coronas)

    def __getitem__(self, i):
        return self.coronas[i]


RemovalDependencyGraph = DependencyGraph


@dataclass(frozen=True)
class RemovalStrengths:
    rs_id: np.ndarray
    rs_od: np.ndarray


def core_strength(g: Graph, cs: CoreState) -> np.ndarray:
    """CS(u) = |Δ≥(u)| - K(u) + 1."""
    return np.array(count_geq(g, core_list(cs)), dtype=np.int64) - cs.core + 1


def find_vulnerable_and_sensitive(g: Graph, cs: CoreState):
    """Vulnerable node set and, per vulnerable node, its sensitive edges."""
    core = core_list(cs)
    vulnerable = set()
    sensitive: dict[int, list[Edge]] = {}
    for u in g.nodes():
        k = core[u]
        geq = sorted(v for v in g.adj[u] if core[v] >= k)
        if len(geq) == k:
            vulnerable.add(u)
            sensitive[u] = [edge_key(u, v) for v in geq]
    return frozenset(vulnerable), sensitive


def find_k_coronas(g: Graph, cs: CoreState) -> CoronaSet:
    """k-coronas with their KAES and CCN.

    Coronas are found by BFS over vulnerable nodes, moving only between
    nodes of the same core number.  Isolated nodes (k = 0) have no sensitive
    edges and never form a corona.  The CCN of each corona comes from one
    incremental removal of its smallest KAES edge.
    """
    core = core_list(cs)
    vulnerable, sensitive = find_vulnerable_and_sensitive(g, cs)
    coronas = []
    corona_of: dict[int, int] = {}
    kaes_of: dict[Edge, int] = {}
    for s in sorted(vulnerable):
        if s in corona_of or core[s] == 0:
            continue
        k = core[s]
        idx = len(coronas)
        corona_of[s] = idx
        members = [s]
        queue = deque([s])
        while queue:
            w = queue.popleft()
            for x in g.adj[w]:
                if x in vulnerable and x not in corona_of and core[x] == k:
                    corona_of[x] = idx
                    members.append(x)
                    queue.append(x)
        kaes = sorted({e for x in members for e in sensitive[x]})
        for e in kaes:
            kaes_of[e] = idx
        ccn = remove_edge_update(g, cs, kaes[0]).changed_nodes
        coronas.append(Corona(k, frozenset(members), tuple(kaes), ccn))
    return CoronaSet(coronas, vulnerable, corona_of, kaes_of, removals_evaluated=len(coronas))


def build_removal_dependency_graph(g: Graph, cs: CoreState, coronas: CoronaSet | None = None) -> DependencyGraph:
    """Removal dependency graph via the corona shortcut (RSC)."""
    if coronas is None:
        coronas = find_k_coronas(g, cs)
    core = core_list(cs)
    vulnerable = coronas.vulnerable
    rd = DependencyGraph(g.n)
    for u in g.nodes():
        k = core[u]
        if u in vulnerable:
            for v in g.adj[u]:
                if core[v] >= k:
                    rd.add(v, u)
        else:
            for v in g.adj[u]:
                if core[v] == k and v in vulnerable and u in coronas[coronas.corona_of[v]].ccn:
                    rd.add(v, u)
    return rd


def naive_removal_dependency_graph(g: Graph, cs: CoreState) -> DependencyGraph:
    """One incremental removal per edge; the baseline RSC is measured against."""
    rd = DependencyGraph(g.n)
    for u, v in g.edges():
        moved = remove_edge_update(g, cs, (u, v)).changed_nodes
        if v in moved:
            rd.add(u, v)
        if u in moved:
            rd.add(v, u)
    return rd


def removal_strengths(rd: DependencyGraph) -> RemovalStrengths:
    return RemovalStrengths(reciprocal_in_degree(rd), rd.out_degree())


@dataclass
class RemovalResult:
    core: CoreState
    coronas: CoronaSet
    dependency: DependencyGraph
    strengths: RemovalStrengths
    core_strength: np.ndarray

    @property
    def gain(self) -> float:
        """Fraction of per-edge removals saved versus the naive method."""
        return removal_gain(self.core.graph.m, len(self.coronas))


def removal_gain(edge_count: int, corona_count: int) -> float:
    return 1.0 - corona_count / edge_count if edge_count else 0.0


def compute_removal_strengths(g: Graph, cs: CoreState | None = None) -> RemovalResult:
    """Run RSC end to end."""
    if cs is None:
        cs = core_decompose(g)
    coronas = find_k_coronas(g, cs)
    rd = build_removal_dependency_graph(g, cs, coronas)
    return RemovalResult(cs, coronas, rd, removal_strengths(rd), core_strength(g, cs))


# --- Core Strength counterexamples ---------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A set of fewer than CS(node) incident edges whose removal lowers K(node)."""

    node: int
    core_strength: int
    removed: tuple[Edge, ...]
    old_core: int
    new_core: int


def _core_after_removing(g: Graph, edges) -> np.ndarray:
    h = g.copy()
    for e in edges:
        h.remove_edge(*e)
    return core_decompose(h).core


def cs_falsification_scan(g: Graph, cs: CoreState, max_remove: int, max_core_only: bool = True) -> list[Witness]:
    """Search for removals of fewer than CS(u) incident edges that lower K(u).

    Nodes with CS >= 2 are scanned (only those in the maximum k-core when
    ``max_core_only``).  For each, every set of ``s`` incident edges with
    ``1 <= s <= min(max_remove, CS(u) - 1)`` is removed and the graph
    re-peeled.  Returns one witness per decreasing edge set.
    """
    if max_remove < 1:
        raise ParameterError("max_remove must be >= 1")
    strength = core_strength(g, cs)
    core = core_list(cs)
    kmax = cs.max_core
    out = []
    for u in g.nodes():
        c = int(strength[u])
        if c < 2 or (max_core_only and core[u] != kmax):
            continue
        incident = [edge_key(u, v) for v in sorted(g.adj[u])]
        for size in range(1, min(max_remove, c - 1) + 1):
            for combo in itertools.combinations(incident, size):
                new = int(_core_after_removing(g, combo)[u])
                if new < core[u]:
                    out.append(Witness(u, c, combo, core[u], new))
    return out


def single_edge_failure_rate(g: Graph, cs: CoreState, max_core_only: bool = True) -> tuple[int, int]:
    """(decreasing single-edge removals, single-edge removals tried) over
    nodes with CS >= 2, i.e. how often one removal already beats CS."""
    strength = core_strength(g, cs)
    core = core_list(cs)
    kmax = cs.max_core
    tried = hits = 0
    for u in g.nodes():
        if strength[u] < 2 or (max_core_only and core[u] != kmax):
            continue
        for v in g.adj[u]:
            tried += 1
            hits += remove_edge_update(g, cs, (u, v)).as_dict().get(u) is not None
    return hits, tried
