"""Resilience of core numbers against single edge insertions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .cores import CoreState, core_decompose, count_gt, distance2_neighbors
from .dependency import DependencyGraph, reciprocal_in_degree
from .errors import InvalidChangeError, ParameterError
from .graph import Edge, Graph, edge_key
from .incremental import core_list, insert_edge_update

logger = logging.getLogger(__name__)

DISTANCE2 = "distance2"
RANDOM = "random"

CASES = ("lemma6", "lemma7", "lemma8", "fallback")


@dataclass
class InsertionCandidateGraph:
    """Candidate non-edges of ``G``; ``edges`` maps each to how it was drawn."""

    n: int
    edges: dict[Edge, str]
    b: int
    seed: object
    short: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def degree(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d


def _random_partners(g: Graph, u: int, exclude: set[int], need: int, rng) -> list[int]:
    n = g.n
    pool_size = n - 1 - len(exclude)
    if pool_size <= need or pool_size * 4 < n:
        pool = [w for w in range(n) if w != u and w not in exclude]
        if len(pool) <= need:
            return pool
        return sorted(rng.choice(pool, size=need, replace=False).tolist())
    picked: set[int] = set()
    while len(picked) < need:
        w = int(rng.integers(n))
        if w != u and w not in exclude:
            picked.add(w)
    return sorted(picked)


def build_candidate_graph(g: Graph, cs: CoreState | None, b: int, seed) -> InsertionCandidateGraph:
    """Per node: ``b`` random distance-2 partners if it has more than ``b``,
    otherwise all of them plus random non-neighbors to make up ``b``.

    The union over all nodes is returned, so some nodes end up with more than
    ``b`` candidates.  Nodes that run out of non-neighbors keep fewer and are
    listed in ``short``.  ``cs`` is unused; it is accepted so that all
    builders share one call shape.
    """
    if b < 1:
        raise ParameterError("b must be >= 1")
    if b >= g.n:
        raise ParameterError(f"b={b} needs more than {b} nodes, graph has {g.n}")
    rng = np.random.default_rng(seed)
    edges: dict[Edge, str] = {}
    short = []
    for u in g.nodes():
        gamma = sorted(distance2_neighbors(g, u))
        if len(gamma) > b:
            for v in rng.choice(gamma, size=b, replace=False).tolist():
                edges.setdefault(edge_key(u, v), DISTANCE2)
            continue
        for v in gamma:
            edges.setdefault(edge_key(u, v), DISTANCE2)
        need = b - len(gamma)
        if need:
            extra = _random_partners(g, u, g.adj[u] | set(gamma), need, rng)
            if len(extra) < need:
                short.append(u)
            for w in extra:
                edges.setdefault(edge_key(u, w), RANDOM)
    if short:
        logger.warning("%d node(s) have fewer than b=%d candidate partners", len(short), b)
    return InsertionCandidateGraph(g.n, dict(sorted(edges.items())), b, seed, short)


@dataclass(frozen=True)
class Classification:
    """Outcome of the lemma dispatch for one candidate edge.

    ``u``/``v`` are ordered so that ``K(u) <= K(v)``.  ``raises`` lists the
    endpoints whose core number is known to increment (empty for fallback);
    ``also_raised`` is the same-shell neighbor lifted together with ``u``
    in the ``lemma8`` case.
    """

    case: str
    u: int
    v: int
    raises: tuple[int, ...] = ()
    also_raised: tuple[int, ...] = ()


def isc_classify(g: Graph, cs: CoreState, e, gt=None) -> Classification:
    """Decide whether a lemma settles the effect of inserting ``e``.

    ``gt`` is the list of |Δ>(x)| for every node; pass it when classifying
    many edges against one graph.
    """
    u, v = e
    if u == v or g.has_edge(u, v):
        raise InvalidChangeError(f"({u}, {v}) is not a candidate non-edge")
    core = core_list(cs)
    if gt is None:
        gt = count_gt(g, core)
    if core[u] > core[v] or (core[u] == core[v] and u > v):
        u, v = v, u
    k = core[u]
    if k == core[v]:
        if gt[u] == k and gt[v] == k:
            return Classification("lemma7", u, v, (u, v))
        return Classification("fallback", u, v)
    if gt[u] == k:
        return Classification("lemma6", u, v, (u,))
    if gt[u] == k - 1:
        for w in sorted(g.adj[u]):
            if core[w] == k and gt[w] == k:
                return Classification("lemma8", u, v, (u,), (w,))
    return Classification("fallback", u, v)


class InsertionDependencyGraph(DependencyGraph):
    """Insertion dependency graph plus how many candidates each case settled."""

    def __init__(self, n: int, edges=()):
        super().__init__(n, edges)
        self.case_counts = dict.fromkeys(CASES, 0)

    @property
    def lemma_fraction(self) -> float:
        total = sum(self.case_counts.values())
        return 1.0 - self.case_counts["fallback"] / total if total else 0.0


def build_insertion_dependency_graph(
    g: Graph,
    cs: CoreState,
    ic: InsertionCandidateGraph,
    precomputed_subcores=True,
    use_lemmas: bool = True,
) -> InsertionDependencyGraph:
    """ISC: lemma dispatch per candidate edge, incremental insertion otherwise.

    ``precomputed_subcores=True`` reuses ``cs``'s subcore index for every
    fallback; ``False`` rebuilds the subcore by BFS each time.  With
    ``use_lemmas=False`` every candidate goes through the incremental
    algorithm (the naive baseline).
    """
    core = core_list(cs)
    gt = count_gt(g, core)
    lookup = cs if precomputed_subcores is True else (precomputed_subcores or None)
    dep = InsertionDependencyGraph(g.n)
    for e in ic.edges:
        if use_lemmas:
            c = isc_classify(g, cs, e, gt)
        else:
            c = Classification("fallback", *e)
        dep.case_counts[c.case] += 1
        if c.case != "fallback":
            for x in c.raises:
                dep.add(c.v if x == c.u else c.u, x)
            continue
        moved = insert_edge_update(g, cs, (c.u, c.v), precomputed_subcores=lookup).changed_nodes
        if c.u in moved:
            dep.add(c.v, c.u)
        if c.v in moved:
            dep.add(c.u, c.v)
    return dep


@dataclass
class InsertionStrengths:
    is_id: np.ndarray
    is_od: np.ndarray
    is_id_star: np.ndarray
    is_od_star: np.ndarray
    stddev_is_id: np.ndarray
    raw_is_id: np.ndarray  # (trials, n)
    raw_is_od: np.ndarray
    trials: int
    b: int
    seed: int
    case_counts: dict[str, int]
    candidate_graphs: list[InsertionCandidateGraph] = field(default_factory=list, repr=False)
    dependency_graphs: list[InsertionDependencyGraph] = field(default_factory=list, repr=False)


def trial_seed(seed: int, t: int) -> tuple[int, int]:
    return (seed, t)


def neighbor_sum(g: Graph, values: np.ndarray) -> np.ndarray:
    """x(u) + sum of x over u's neighbors."""
    out = np.array(values, dtype=float)
    for u in g.nodes():
        for v in g.adj[u]:
            out[u] += values[v]
    return out


def _trial_stddev(raw: np.ndarray) -> np.ndarray:
    finite = np.isfinite(raw)
    all_inf = ~finite.any(axis=0)
    mixed = ~finite.all(axis=0) & ~all_inf
    with np.errstate(invalid="ignore"):
        sd = np.where(finite.all(axis=0), raw.std(axis=0), 0.0)
    sd[mixed] = np.inf
    sd[all_inf] = 0.0
    return sd


def insertion_strengths(
    g: Graph,
    cs: CoreState | None = None,
    b: int = 5,
    trials: int = 10,
    seed: int = 0,
    precomputed_subcores=True,
) -> InsertionStrengths:
    """IS_ID / IS_OD averaged over ``trials`` independently drawn candidate graphs.

    A node whose in-degree is zero in any trial averages to ``inf``.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if cs is None:
        cs = core_decompose(g)
    raw_id = np.empty((trials, g.n))
    raw_od = np.empty((trials, g.n))
    counts = dict.fromkeys(CASES, 0)
    ics, ids = [], []
    for t in range(trials):
        ic = build_candidate_graph(g, cs, b, trial_seed(seed, t))
        dep = build_insertion_dependency_graph(g, cs, ic, precomputed_subcores=precomputed_subcores)
        raw_id[t] = reciprocal_in_degree(dep)
        raw_od[t] = dep.out_degree()
        for k, c in dep.case_counts.items():
            counts[k] += c
        ics.append(ic)
        ids.append(dep)
    is_id = raw_id.mean(axis=0)
    is_od = raw_od.mean(axis=0)
    return InsertionStrengths(
        is_id=is_id,
        is_od=is_od,
        is_id_star=neighbor_sum(g, is_id),
        is_od_star=neighbor_sum(g, is_od),
        stddev_is_id=_trial_stddev(raw_id),
        raw_is_id=raw_id,
        raw_is_od=raw_od,
        trials=trials,
        b=b,
        seed=seed,
        case_counts=counts,
        candidate_graphs=ics,
        dependency_graphs=ids,
    )
