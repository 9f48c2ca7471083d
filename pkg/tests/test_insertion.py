import numpy as np
import pytest

from conftest import er_graph, er_suite, ids, k4, named, star, triangle_pendant, two_triangles, two_triangles_pendants
from oracles import core_after_insertion as brute_after_insert
from oracles import insertion_dependency as brute_insertion_dependency
from kcore_resilience.cores import core_decompose, count_gt, distance2_neighbors
from kcore_resilience.errors import InvalidChangeError, ParameterError
from kcore_resilience.graph import Graph, edge_key
from kcore_resilience.insertion import (
    DISTANCE2,
    RANDOM,
    InsertionCandidateGraph,
    build_candidate_graph,
    build_insertion_dependency_graph,
    insertion_strengths,
    isc_classify,
    neighbor_sum,
)


def forced(g, *pairs):
    edges = {edge_key(*ids(g, a, b)): DISTANCE2 for a, b in pairs}
    return InsertionCandidateGraph(g.n, edges, b=1, seed=None)


# --- candidate graph ---------------------------------------------------------------


def test_candidates_star_b2():
    g = star()
    ic = build_candidate_graph(g, None, 2, seed=3)
    c = g.node_of("c")
    center_edges = [e for e in ic.edges if c in e]
    # center has no distance-2 neighbors and is adjacent to everyone
    assert center_edges == []
    assert c in ic.short
    for leaf in range(g.n):
        if leaf == c:
            continue
        own = [e for e in ic.edges if leaf in e]
        assert len(own) >= 2
        assert all(ic.edges[e] == DISTANCE2 for e in own)
    for u, v in ic.edges:
        assert not g.has_edge(u, v)


def test_candidates_path_b1():
    g = named([("a", "b"), ("b", "c")])
    ic = build_candidate_graph(g, None, 1, seed=0)
    a, b, c = ids(g, "a", "b", "c")
    assert ic.edges == {edge_key(a, c): DISTANCE2}
    assert ic.short == [b]


def test_candidates_random_fill():
    # 0 and 5 have one distance-2 neighbor each; with b=2 they draw a random partner
    g = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (6, 7)])
    ic = build_candidate_graph(g, None, 2, seed=11)
    assert any(t == RANDOM for t in ic.edges.values())
    deg = ic.degree()
    assert (deg >= 2).all()
    for (u, v), tag in ic.edges.items():
        assert not g.has_edge(u, v)
        if tag == DISTANCE2:
            assert v in distance2_neighbors(g, u)
        else:
            assert v not in distance2_neighbors(g, u)


def test_candidates_parameter_errors():
    g = k4()
    with pytest.raises(ParameterError):
        build_candidate_graph(g, None, 0, seed=0)
    with pytest.raises(ParameterError):
        build_candidate_graph(g, None, 4, seed=0)


@pytest.mark.parametrize("seed", range(5))
def test_candidates_lower_bound_and_determinism(seed):
    g = er_graph(80, 0.05, 900 + seed)
    ic = build_candidate_graph(g, None, 5, seed=seed)
    assert ic.edges == build_candidate_graph(g, None, 5, seed=seed).edges
    deg = ic.degree()
    for u in g.nodes():
        if u not in ic.short:
            assert deg[u] >= 5
        else:
            assert g.n - 1 - g.degree(u) < 5


# --- lemma dispatch -----------------------------------------------------------------


def test_lemma6_triangle_pendant():
    g = triangle_pendant()
    cs = core_decompose(g)
    c = isc_classify(g, cs, ids(g, "p", "b"))
    assert c.case == "lemma6" and c.raises == (g.node_of("p"),)


def test_lemma7_two_pendants():
    g = two_triangles_pendants()
    c = isc_classify(g, core_decompose(g), ids(g, "p1", "p2"))
    assert c.case == "lemma7" and set(c.raises) == set(ids(g, "p1", "p2"))


def test_lemma8_chain():
    g = named([("u", "w"), ("w", "a"), ("a", "b"), ("b", "c"), ("c", "a")])
    cs = core_decompose(g)
    c = isc_classify(g, cs, ids(g, "u", "a"))
    assert c.case == "lemma8"
    assert c.raises == (g.node_of("u"),) and c.also_raised == (g.node_of("w"),)
    after = brute_after_insert(g, ids(g, "u", "a"))
    assert after[g.node_of("u")] == 2 and after[g.node_of("w")] == 2


def test_classify_existing_edge():
    g = triangle_pendant()
    with pytest.raises(InvalidChangeError):
        isc_classify(g, core_decompose(g), ids(g, "a", "b"))


def test_dependency_triangle_pendant():
    g = triangle_pendant()
    dep = build_insertion_dependency_graph(g, core_decompose(g), forced(g, ("p", "b")))
    assert dep.edges() == [tuple(ids(g, "b", "p"))]


def test_dependency_two_triangles_cross():
    g = two_triangles()
    dep = build_insertion_dependency_graph(g, core_decompose(g), forced(g, (1, 4)))
    assert len(dep) == 0


@pytest.mark.parametrize("idx", range(0, 50, 5))
def test_dispatch_soundness(idx):
    g = er_suite()[idx]
    cs = core_decompose(g)
    base = cs.core
    gt = count_gt(g, cs.core.tolist())
    for u in g.nodes():
        for v in distance2_neighbors(g, u):
            if u > v:
                continue
            c = isc_classify(g, cs, (u, v), gt)
            if c.case == "fallback":
                continue
            after = brute_after_insert(g, (u, v))
            rose = {x for x in (u, v) if after[x] > base[x]}
            assert rose == set(c.raises), c
            for w in c.also_raised:
                assert after[w] == base[w] + 1


@pytest.mark.parametrize("idx", range(1, 50, 7))
def test_isc_matches_oracle(idx):
    g = er_suite()[idx]
    cs = core_decompose(g)
    ic = build_candidate_graph(g, cs, 3, seed=idx)
    dep = build_insertion_dependency_graph(g, cs, ic)
    assert dep.edge_set() == brute_insertion_dependency(g, ic.edges)
    assert dep == build_insertion_dependency_graph(g, cs, ic, use_lemmas=False)
    assert dep == build_insertion_dependency_graph(g, cs, ic, precomputed_subcores=False)
    assert sum(dep.case_counts.values()) == len(ic)
    for s, d in dep.edges():
        assert edge_key(s, d) in ic.edges


# --- strengths -------------------------------------------------------------------------


def test_strengths_two_triangles_all_inf():
    g = two_triangles()
    st = insertion_strengths(g, b=2, trials=3, seed=1)
    assert np.isinf(st.is_id).all()
    assert (st.is_od == 0).all()
    assert (st.stddev_is_id == 0).all()


def test_strengths_forced_single_candidate(monkeypatch):
    import kcore_resilience.insertion as ins

    g = triangle_pendant()
    monkeypatch.setattr(ins, "build_candidate_graph", lambda g_, cs, b, seed: forced(g_, ("p", "b")))
    st = ins.insertion_strengths(g, b=1, trials=1, seed=0)
    p, b = ids(g, "p", "b")
    assert st.is_od[b] == 1 and st.is_id[p] == 1
    assert st.is_od[p] == 0 and np.isinf(st.is_id[b])


def test_strengths_deterministic_and_averaged():
    g = er_graph(60, 0.08, 77)
    a = insertion_strengths(g, b=3, trials=4, seed=9)
    b = insertion_strengths(g, b=3, trials=4, seed=9)
    for f in ("is_id", "is_od", "is_id_star", "is_od_star", "stddev_is_id", "raw_is_id"):
        assert np.array_equal(getattr(a, f), getattr(b, f))
    assert np.allclose(a.is_od, a.raw_is_od.mean(axis=0))
    finite = np.isfinite(a.raw_is_id).all(axis=0)
    assert np.allclose(a.is_id[finite], a.raw_is_id[:, finite].mean(axis=0))
    assert np.isinf(a.is_id[~finite]).all()
    # fresh candidate graphs per trial
    assert a.candidate_graphs[0].edges != a.candidate_graphs[1].edges
    c = insertion_strengths(g, b=3, trials=4, seed=10)
    assert not np.array_equal(a.raw_is_od, c.raw_is_od)


def test_neighbor_sum():
    g = named([("a", "b"), ("b", "c")])
    vals = np.array([1.0, 2.0, 4.0])
    assert neighbor_sum(g, vals).tolist() == [3.0, 7.0, 6.0]
    st = insertion_strengths(er_graph(30, 0.1, 5), b=2, trials=2, seed=0)
    g = er_graph(30, 0.1, 5)
    for u in g.nodes():
        assert st.is_od_star[u] == pytest.approx(st.is_od[u] + sum(st.is_od[v] for v in g.adj[u]))


def test_trials_validation():
    with pytest.raises(ParameterError):
        insertion_strengths(two_triangles(), b=2, trials=0)
