"""Critical-edge selection and spreader seeding driven by the strength measures."""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cores import CoreState, core_decompose
from .errors import ParameterError
from .graph import Edge, Graph
from .incremental import DynamicCores, core_list
from .insertion import insertion_strengths
from .removal import compute_removal_strengths, core_strength, find_k_coronas
from .sir import SirConfig, SirTrace, run_sir

logger = logging.getLogger(__name__)

REMOVAL_MEASURES = ("rs_id", "rs_od")
INSERTION_MEASURES = ("is_id", "is_od", "is_id_star", "is_od_star")
BASELINES = ("random", "degree", "core_number", "core_strength")
SPREADER_BASELINES = ("random", "kshell", "iks", "core_strength", "degree")


@dataclass(frozen=True)
class EdgeScorePolicy:
    method: str
    aggregation: str = "sum"
    order: str = "highest"

    def __post_init__(self):
        known = REMOVAL_MEASURES + INSERTION_MEASURES + BASELINES
        if self.method not in known:
            raise ParameterError(f"unknown method {self.method!r}")
        if self.aggregation not in ("sum", "max"):
            raise ParameterError(f"unknown aggregation {self.aggregation!r}")
        if self.order not in ("lowest", "highest"):
            raise ParameterError(f"unknown order {self.order!r}")

    @classmethod
    def for_method(cls, method: str) -> "EdgeScorePolicy":
        """Default scoring: RS_ID lowest sum, RS_OD highest sum, insertion
        strengths lowest max, baselines highest sum."""
        if method == "rs_id":
            return cls(method, "sum", "lowest")
        if method in INSERTION_MEASURES:
            return cls(method, "max", "lowest")
        return cls(method, "sum", "highest")

    def rank(self, values, edges: list[Edge]) -> list[Edge]:
        """Edges best-first; ties by edge id."""
        vals = np.asarray(values, dtype=float)
        ep = np.array(edges, dtype=np.int64).reshape(-1, 2)
        a, b = vals[ep[:, 0]], vals[ep[:, 1]]
        score = a + b if self.aggregation == "sum" else np.maximum(a, b)
        if self.order == "highest":
            score = -score
        # lexsort: last key is primary
        order = np.lexsort((ep[:, 1], ep[:, 0], score))
        return [edges[i] for i in order]


# --- node values -----------------------------------------------------------------


def information_entropy(g: Graph) -> np.ndarray:
    """-sum over neighbors v of p_v ln p_v with p_v = deg(v) / sum of all degrees."""
    deg = np.array(g.degrees(), dtype=float)
    total = deg.sum()
    if total == 0:
        return np.zeros(g.n)
    p = deg / total
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(p), 0.0)
    return np.array([terms[list(g.adj[u])].sum() if g.adj[u] else 0.0 for u in g.nodes()])


def baseline_scores(g: Graph, cs: CoreState, method: str) -> np.ndarray:
    if method == "degree":
        return np.array(g.degrees(), dtype=float)
    if method in ("core_number", "kshell"):
        return cs.core.astype(float)
    if method == "core_strength":
        return core_strength(g, cs).astype(float)
    if method == "iks":
        return information_entropy(g)
    raise ParameterError(f"unknown baseline {method!r}")


class NodeValues:
    """Lazily computes and caches every per-node measure for one graph."""

    def __init__(self, g: Graph, cs: CoreState | None = None, b: int = 5, trials: int = 10, seed: int = 0):
        self.g = g
        self.cs = cs if cs is not None else core_decompose(g)
        self.b, self.trials, self.seed = b, trials, seed
        self._removal = None
        self._insertion = None

    @property
    def removal(self):
        if self._removal is None:
            self._removal = compute_removal_strengths(self.g, self.cs)
        return self._removal

    @property
    def insertion(self):
        if self._insertion is None:
            self._insertion = insertion_strengths(self.g, self.cs, self.b, self.trials, self.seed)
        return self._insertion

    def __getitem__(self, method: str) -> np.ndarray | None:
        if method == "random":
            return None
        if method in REMOVAL_MEASURES:
            return getattr(self.removal.strengths, method).astype(float)
        if method in INSERTION_MEASURES:
            return getattr(self.insertion, method)
        return baseline_scores(self.g, self.cs, method)


# --- critical edges ---------------------------------------------------------------


def select_critical_removals(g: Graph, cs: CoreState, strengths, policy: EdgeScorePolicy, c: int,
                             coronas=None, seed=0) -> list[Edge]:
    """Up to ``c`` edges to delete.

    Scored policies rank once on the initial graph and take at most one edge
    from any KAES, since every edge of a KAES yields the same core vector.
    ``random`` draws ``c`` distinct edges uniformly, without the KAES rule.
    """
    if c > g.m:
        raise ParameterError(f"budget {c} exceeds edge count {g.m}")
    edges = list(g.edges())
    if policy.method == "random":
        rng = np.random.default_rng(seed)
        return [edges[i] for i in rng.choice(len(edges), size=c, replace=False)]
    if coronas is None:
        coronas = find_k_coronas(g, cs)
    picked, used = [], set()
    for e in policy.rank(strengths, edges):
        if len(picked) == c:
            break
        key = coronas.kaes_of.get(e)
        if key is not None:
            if key in used:
                continue
            used.add(key)
        picked.append(e)
    return picked


def insertion_candidate_set(g: Graph) -> list[Edge]:
    """Non-adjacent pairs with at least two common neighbors."""
    common: Counter = Counter()
    for w in g.nodes():
        nb = sorted(g.adj[w])
        for i, u in enumerate(nb):
            for v in nb[i + 1:]:
                common[(u, v)] += 1
    return sorted(e for e, k in common.items() if k >= 2 and not g.has_edge(*e))


def select_critical_insertions(g: Graph, cs: CoreState, strengths, policy: EdgeScorePolicy, c: int,
                               seed=0, candidates=None) -> list[Edge]:
    """Up to ``c`` edges to insert, applied in rank order.

    An edge is skipped when both endpoints already gained a core level from
    earlier insertions in this run; skipped edges do not use budget.
    """
    if candidates is None:
        candidates = insertion_candidate_set(g)
    if not candidates:
        logger.warning("no candidate edges (no non-adjacent pair shares two neighbors)")
        return []
    if policy.method == "random":
        rng = np.random.default_rng(seed)
        ranked = [candidates[i] for i in rng.permutation(len(candidates))]
    else:
        ranked = policy.rank(strengths, candidates)
    initial = core_list(cs)
    dyn = DynamicCores(g, cs)
    applied = []
    for u, v in ranked:
        if len(applied) == c:
            break
        if dyn.core[u] > initial[u] and dyn.core[v] > initial[v]:
            continue
        dyn.insert(u, v)
        applied.append((u, v))
    return applied


def measure_F(g: Graph, initial_cs: CoreState, edges, kind: str) -> float:
    """Percentage of nodes whose core number differs after applying all edges."""
    if g.n == 0:
        return 0.0
    h = g.copy()
    for e in edges:
        if kind == "remove":
            h.remove_edge(*e)
        elif kind == "insert":
            h.add_edge(*e)
        else:
            raise ParameterError(f"unknown kind {kind!r}")
    after = core_decompose(h).core
    return 100.0 * int(np.count_nonzero(after != initial_cs.core)) / g.n


def measure_F_incremental(g: Graph, initial_cs: CoreState, edges, kind: str) -> float:
    """Same as :func:`measure_F`, via one incremental update per edge."""
    dyn = DynamicCores(g, initial_cs)
    step = dyn.remove if kind == "remove" else dyn.insert
    for e in edges:
        step(*e)
    return 100.0 * sum(a != b for a, b in zip(dyn.core, core_list(initial_cs))) / max(g.n, 1)


@dataclass
class ExperimentResult:
    method: str
    kind: str
    budgets: list[int]
    F: list[float]
    runs: int = 1
    seed: int = 0
    selected: list[int] = field(default_factory=list)  # edges actually chosen per budget


def _f_series(g, cs, picked, kind, budgets):
    out = []
    for c in budgets:
        out.append(measure_F(g, cs, picked[:c], kind))
    return out


def _critical_cell(args):
    g, cs, kind, method, budgets, seed, random_runs, values, shared = args
    policy = EdgeScorePolicy.for_method(method)
    top = max(budgets)
    select = select_critical_removals if kind == "remove" else select_critical_insertions
    # coronas for removal, the candidate set for insertion
    extra = {"coronas": shared} if kind == "remove" else {"candidates": shared}
    if method == "random":
        if kind == "remove":
            top = min(top, g.m)
        series = []
        sizes = []
        for r in range(random_runs):
            picked = select(g, cs, None, policy, top, seed=(seed, r), **extra)
            series.append(_f_series(g, cs, picked, kind, budgets))
            sizes.append(len(picked))
        F = np.mean(series, axis=0).tolist() if series else [0.0] * len(budgets)
        return ExperimentResult(method, kind, list(budgets), F, random_runs, seed,
                                [min(c, min(sizes)) for c in budgets])
    picked = select(g, cs, values, policy, min(top, g.m) if kind == "remove" else top, **extra)
    return ExperimentResult(method, kind, list(budgets), _f_series(g, cs, picked, kind, budgets), 1, seed,
                            [min(c, len(picked)) for c in budgets])


def critical_edge_experiment(g: Graph, kind: str, methods, budgets, seed: int = 0, random_runs: int = 50,
                             b: int = 5, trials: int = 10, workers: int = 1, values: NodeValues | None = None):
    """F versus budget for every method; one result per method.

    Selections are prefix-consistent, so each method selects once at the
    largest budget and F is measured on prefixes.
    """
    if kind not in ("remove", "insert"):
        raise ParameterError(f"unknown kind {kind!r}")
    allowed = (REMOVAL_MEASURES if kind == "remove" else INSERTION_MEASURES) + BASELINES
    for m in methods:
        if m not in allowed:
            raise ParameterError(f"method {m!r} not available for {kind}")
    budgets = sorted(int(c) for c in budgets)
    if not budgets or budgets[0] < 0:
        raise ParameterError("budgets must be non-negative and non-empty")
    nv = values or NodeValues(g, b=b, trials=trials, seed=seed)
    cs = nv.cs
    shared = nv.removal.coronas if kind == "remove" else insertion_candidate_set(g)
    cells = [(g, cs, kind, m, budgets, seed, random_runs, nv[m], shared) for m in methods]
    return _map(_critical_cell, cells, workers)


def _map(fn, cells, workers):
    if workers and workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, cells))
    return [fn(c) for c in cells]


# --- spreaders -------------------------------------------------------------------------


def seed_count(n: int, fraction: float) -> int:
    if not 0 < fraction <= 1:
        raise ParameterError("fraction must be in (0, 1]")
    return min(n, math.ceil(round(fraction * n, 9)))


def _ordered(nodes, values, tiebreak):
    # largest value first (inf ranks highest); random tie-break
    return sorted(nodes, key=lambda x: (-values[x], tiebreak[x]))


def select_spreaders(g: Graph, cs: CoreState, strengths, fraction: float = 0.2, seed=0) -> list[int]:
    """Round-robin over shells from the highest k down to 1, taking the
    strongest unchosen node of each shell per pass, until the quota is met.

    The 0-shell (isolated nodes) is only visited if the other shells run out.
    """
    target = seed_count(g.n, fraction)
    rng = np.random.default_rng(seed)
    tiebreak = rng.random(g.n)
    values = np.asarray(strengths, dtype=float)
    shells = cs.shell_index
    order = [k for k in sorted(shells, reverse=True) if k >= 1]
    queues = [_ordered(shells[k], values, tiebreak) for k in order]
    chosen: list[int] = []
    pos = [0] * len(queues)
    while len(chosen) < target and any(p < len(q) for p, q in zip(pos, queues)):
        for i, q in enumerate(queues):
            if len(chosen) == target:
                break
            if pos[i] < len(q):
                chosen.append(q[pos[i]])
                pos[i] += 1
    if len(chosen) < target and 0 in shells:
        chosen.extend(_ordered(shells[0], values, tiebreak)[: target - len(chosen)])
    return chosen


def top_nodes(values, count: int, seed=0) -> list[int]:
    """Globally largest values first, random tie-break."""
    vals = np.asarray(values, dtype=float)
    tiebreak = np.random.default_rng(seed).random(len(vals))
    return _ordered(range(len(vals)), vals, tiebreak)[:count]


def select_seed_set(method: str, g: Graph, values: NodeValues, fraction: float = 0.2, seed=0) -> list[int]:
    """Seed nodes for one spreader method.

    Strength measures and IKS use the per-shell round robin; ``kshell``,
    ``core_strength`` and ``degree`` take the global top values.
    """
    cs = values.cs
    count = seed_count(g.n, fraction)
    if method == "random":
        rng = np.random.default_rng(seed)
        return sorted(rng.choice(g.n, size=count, replace=False).tolist())
    if method in REMOVAL_MEASURES + INSERTION_MEASURES or method == "iks":
        return select_spreaders(g, cs, values[method], fraction, seed)
    if method in ("kshell", "core_strength", "degree"):
        return top_nodes(baseline_scores(g, cs, method), count, seed)
    raise ParameterError(f"unknown spreader method {method!r}")


def _spreader_cell(args):
    g, method, seeds, cfg = args
    return method, run_sir(g, seeds, cfg)


def spreader_experiment(g: Graph, methods, fraction: float, cfg: SirConfig, seed: int = 0, b: int = 5,
                        trials: int = 10, workers: int = 1, values: NodeValues | None = None):
    """SIR trace for each method's seed set; returns ``{method: (seeds, trace)}``."""
    nv = values or NodeValues(g, b=b, trials=trials, seed=seed)
    seed_sets = {m: select_seed_set(m, g, nv, fraction, seed) for m in methods}
    cells = [(g, m, seed_sets[m], cfg) for m in methods]
    traces: dict[str, SirTrace] = dict(_map(_spreader_cell, cells, workers))
    return {m: (seed_sets[m], traces[m]) for m in methods}
