import math

import numpy as np
import pytest

from conftest import csx, er_graph, ids, k4, named, star, triangle, two_triangles
from kcore_resilience.applications import (
    EdgeScorePolicy,
    NodeValues,
    baseline_scores,
    critical_edge_experiment,
    information_entropy,
    insertion_candidate_set,
    measure_F,
    measure_F_incremental,
    select_critical_insertions,
    select_critical_removals,
    select_seed_set,
    select_spreaders,
    spreader_experiment,
)
from kcore_resilience.cores import core_decompose
from kcore_resilience.errors import ParameterError
from kcore_resilience.graph import Graph
from kcore_resilience.removal import compute_removal_strengths, find_k_coronas
from kcore_resilience.sir import SirConfig


def policy(m):
    return EdgeScorePolicy.for_method(m)


# --- policies ---------------------------------------------------------------------


def test_policy_defaults():
    assert policy("rs_id") == EdgeScorePolicy("rs_id", "sum", "lowest")
    assert policy("rs_od") == EdgeScorePolicy("rs_od", "sum", "highest")
    assert policy("is_od_star") == EdgeScorePolicy("is_od_star", "max", "lowest")
    assert policy("degree").order == "highest"
    with pytest.raises(ParameterError):
        EdgeScorePolicy("pagerank")


def test_rank_ties_by_edge_id():
    p = EdgeScorePolicy("degree", "sum", "highest")
    assert p.rank(np.ones(4), [(2, 3), (0, 1), (1, 2)]) == [(0, 1), (1, 2), (2, 3)]


# --- removal selection -----------------------------------------------------------------


def test_removal_csx_rs_id():
    g = csx()
    cs = core_decompose(g)
    res = compute_removal_strengths(g, cs)
    (e,) = select_critical_removals(g, cs, res.strengths.rs_id, policy("rs_id"), 1)
    u = g.node_of("u")
    assert u not in e
    assert {g.labels[x] for x in e} in ({"a", "b"}, {"c", "d"})


def test_removal_random_all_edges():
    g = er_graph(30, 0.2, 1)
    cs = core_decompose(g)
    picked = select_critical_removals(g, cs, None, policy("random"), g.m, seed=3)
    assert sorted(picked) == list(g.edges())


def test_removal_triangle_dedup():
    g = triangle()
    cs = core_decompose(g)
    vals = compute_removal_strengths(g, cs).strengths.rs_od
    for m in ("rs_id", "rs_od", "degree", "core_number", "core_strength"):
        assert len(select_critical_removals(g, cs, vals, policy(m), 2)) == 1


def test_removal_budget_too_large():
    g = triangle()
    with pytest.raises(ParameterError):
        select_critical_removals(g, core_decompose(g), None, policy("random"), 4)


@pytest.mark.parametrize("seed", range(4))
def test_removal_no_two_from_one_kaes(seed):
    g = er_graph(80, 0.08, 40 + seed)
    cs = core_decompose(g)
    nv = NodeValues(g, cs)
    cor = find_k_coronas(g, cs)
    for m in ("rs_id", "rs_od", "degree", "core_strength"):
        picked = select_critical_removals(g, cs, nv[m], policy(m), 40, coronas=cor)
        keys = [cor.kaes_of[e] for e in picked if e in cor.kaes_of]
        assert len(keys) == len(set(keys))


# --- insertion selection --------------------------------------------------------------


def test_candidate_set_c4():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert insertion_candidate_set(g) == [(0, 2), (1, 3)]


def test_candidate_set_two_triangles():
    assert insertion_candidate_set(two_triangles()) == []


def test_insertion_empty_candidates():
    g = two_triangles()
    assert select_critical_insertions(g, core_decompose(g), None, policy("random"), 5) == []


def test_insertion_exhaustion_and_skip_rule():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    cs = core_decompose(g)
    # one chord leaves every core at 2; the second makes K4
    picked = select_critical_insertions(g, cs, np.zeros(4), policy("is_id"), 10)
    assert picked == [(0, 2), (1, 3)]
    assert measure_F(g, cs, picked, "insert") == 100.0
    assert measure_F(g, cs, picked, "insert") == measure_F_incremental(g, cs, picked, "insert")


def test_insertion_skip_when_both_raised():
    # two candidate pairs sharing endpoints: after the first, both endpoints of the second are raised
    g = named([("x", "a"), ("x", "b"), ("y", "a"), ("y", "b"), ("a", "c"), ("b", "c")])
    cs = core_decompose(g)
    cands = insertion_candidate_set(g)
    picked = select_critical_insertions(g, cs, np.zeros(g.n), policy("is_id"), len(cands))
    dyn_f = measure_F(g, cs, picked, "insert")
    assert 0 <= dyn_f <= 100
    # replay: no applied edge had both endpoints raised before it was applied
    h = g.copy()
    init = cs.core
    for u, v in picked:
        now = core_decompose(h).core
        assert not (now[u] > init[u] and now[v] > init[v])
        h.add_edge(u, v)


@pytest.mark.parametrize("seed", range(3))
def test_insertion_count_and_validity(seed):
    g = er_graph(60, 0.1, 70 + seed)
    cs = core_decompose(g)
    nv = NodeValues(g, cs, b=3, trials=2, seed=seed)
    for m in ("is_id", "is_od", "is_id_star", "random"):
        picked = select_critical_insertions(g, cs, nv[m], policy(m), 15, seed=seed)
        assert len(picked) <= 15
        assert len(set(picked)) == len(picked)
        for u, v in picked:
            assert not g.has_edge(u, v)


# --- F ------------------------------------------------------------------------------------


def test_F_examples():
    g = triangle()
    cs = core_decompose(g)
    assert measure_F(g, cs, [(0, 1)], "remove") == 100.0
    assert measure_F(g, cs, [], "remove") == 0.0
    g = star()
    cs = core_decompose(g)
    assert measure_F(g, cs, [tuple(ids(g, "c", "l1"))], "remove") == pytest.approx(100 / 6)


@pytest.mark.parametrize("seed", range(5))
def test_F_incremental_equals_recompute(seed):
    g = er_graph(200, 0.03, 80 + seed)
    cs = core_decompose(g)
    rng = np.random.default_rng(seed)
    edges = list(g.edges())
    rem = [edges[i] for i in rng.choice(len(edges), 60, replace=False)]
    assert measure_F(g, cs, rem, "remove") == pytest.approx(measure_F_incremental(g, cs, rem, "remove"))
    ins = insertion_candidate_set(g)[:60]
    assert measure_F(g, cs, ins, "insert") == pytest.approx(measure_F_incremental(g, cs, ins, "insert"))


def test_experiment_monotone_and_bounded():
    g = er_graph(120, 0.06, 5)
    res = critical_edge_experiment(g, "remove", ["rs_id", "rs_od", "random", "degree"], [5, 10, 20, 40],
                                   seed=1, random_runs=5)
    for r in res:
        assert all(0 <= f <= 100 for f in r.F)
        assert r.F == sorted(r.F)
    res = critical_edge_experiment(g, "insert", ["is_id", "random", "core_strength"], [5, 10, 20],
                                   seed=1, random_runs=3, b=3, trials=2)
    for r in res:
        assert all(0 <= f <= 100 for f in r.F)


def test_experiment_random_full_budget_sanity():
    g = er_graph(40, 0.15, 8)
    cs = core_decompose(g)
    (r,) = critical_edge_experiment(g, "remove", ["random"], [g.m], random_runs=2)
    # deleting everything drops every node with K > 0
    assert r.F == [pytest.approx(100.0 * np.count_nonzero(cs.core > 0) / g.n)]


def test_experiment_rejects_wrong_method():
    with pytest.raises(ParameterError):
        critical_edge_experiment(triangle(), "remove", ["is_id"], [1])
    with pytest.raises(ParameterError):
        critical_edge_experiment(triangle(), "sideways", ["random"], [1])


def test_experiment_workers_same_result():
    g = er_graph(80, 0.08, 9)
    a = critical_edge_experiment(g, "remove", ["rs_id", "random"], [5, 10], random_runs=3, workers=1)
    b = critical_edge_experiment(g, "remove", ["rs_id", "random"], [5, 10], random_runs=3, workers=2)
    assert [x.F for x in a] == [x.F for x in b]


# --- spreaders ---------------------------------------------------------------------------


def test_spreaders_csx_rs_od():
    g = csx()
    cs = core_decompose(g)
    rs = compute_removal_strengths(g, cs).strengths
    assert select_spreaders(g, cs, rs.rs_od, 0.2, seed=0) == [g.node_of("u")]


def test_spreaders_single_pass_highest_shell_first():
    # shells: K4 (k=3), triangle (k=2), pendant path (k=1)
    g = Graph(10, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (5, 6), (6, 4), (7, 8), (8, 9)])
    cs = core_decompose(g)
    vals = np.arange(10, dtype=float)
    assert select_spreaders(g, cs, vals, 0.3, seed=0) == [3, 6, 9]


def test_spreaders_round_robin_and_quota():
    g = er_graph(50, 0.1, 3)
    cs = core_decompose(g)
    vals = np.random.default_rng(0).random(50)
    picked = select_spreaders(g, cs, vals, 0.2, seed=1)
    assert len(picked) == math.ceil(0.2 * 50) == len(set(picked))
    # first pass: one node per shell, highest shell first, strongest in shell
    shells = [k for k in sorted(cs.shell_index, reverse=True) if k >= 1]
    for k, x in zip(shells, picked):
        assert cs.core[x] == k
        assert vals[x] == max(vals[y] for y in cs.shell_index[k])


def test_spreaders_inf_ranks_highest():
    g = triangle()
    cs = core_decompose(g)
    assert select_spreaders(g, cs, np.array([1.0, np.inf, 2.0]), 0.3) == [1]


def test_spreaders_tie_break_is_seeded():
    g = er_graph(60, 0.1, 4)
    cs = core_decompose(g)
    flat = np.ones(60)
    runs = {tuple(select_spreaders(g, cs, flat, 0.2, seed=s)) for s in range(6)}
    assert len(runs) > 1
    assert select_spreaders(g, cs, flat, 0.2, seed=2) == select_spreaders(g, cs, flat, 0.2, seed=2)


def test_spreaders_fraction_validation():
    g = triangle()
    with pytest.raises(ParameterError):
        select_spreaders(g, core_decompose(g), np.ones(3), 0.0)


def test_spreaders_include_isolated_when_short():
    g = Graph(5, [(0, 1)])
    cs = core_decompose(g)
    assert sorted(select_spreaders(g, cs, np.ones(5), 1.0)) == [0, 1, 2, 3, 4]


# --- baselines ---------------------------------------------------------------------------


def test_baselines_examples():
    g = k4()
    assert baseline_scores(g, core_decompose(g), "degree").tolist() == [3] * 4
    g = star()
    assert baseline_scores(g, core_decompose(g), "core_number").tolist() == [1] * 6
    g = csx()
    cs_vals = baseline_scores(g, core_decompose(g), "core_strength")
    assert cs_vals[g.node_of("u")] == 3
    with pytest.raises(ParameterError):
        baseline_scores(g, core_decompose(g), "closeness")


def test_information_entropy():
    g = named([("a", "b"), ("b", "c")])
    # degrees 1,2,1 -> p = 1/4, 1/2, 1/4
    h = information_entropy(g)
    q = lambda p: -p * math.log(p)
    assert h.tolist() == pytest.approx([q(0.5), 2 * q(0.25), q(0.5)])


def test_seed_sets_each_method():
    g = er_graph(80, 0.08, 12)
    nv = NodeValues(g, b=3, trials=2)
    for m in ("rs_id", "rs_od", "is_id", "is_od", "iks", "kshell", "core_strength", "degree", "random"):
        s = select_seed_set(m, g, nv, 0.2, seed=1)
        assert len(s) == 16 == len(set(s))
    top = select_seed_set("kshell", g, nv, 0.2)
    assert min(nv.cs.core[top]) >= max(np.delete(nv.cs.core, top))
    with pytest.raises(ParameterError):
        select_seed_set("pagerank", g, nv)


def test_spreader_experiment_shapes():
    g = er_graph(60, 0.1, 13)
    out = spreader_experiment(g, ["rs_od", "random"], 0.2, SirConfig(0.1, 0.01, steps=5, runs=3), seed=0)
    for m, (seeds, tr) in out.items():
        assert len(seeds) == 12
        assert tr.S_t[0] == pytest.approx(12 / 60)
        assert tr.S_t.shape == (6,)
