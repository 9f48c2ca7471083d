import random

import networkx as nx
import pytest

from kcore_resilience.graph import Graph


def named(edges):
    return Graph.from_labeled_edges(edges)


def triangle():
    return named([(1, 2), (2, 3), (3, 1)])


def k4():
    return named([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


def star(leaves=5):
    return named([("c", f"l{i}") for i in range(1, leaves + 1)])


def csx():
    """Node u with two attached triangles u-a-b and u-c-d."""
    return named([("u", "a"), ("u", "b"), ("u", "c"), ("u", "d"), ("a", "b"), ("c", "d")])


def triangle_pendant():
    return named([("a", "b"), ("b", "c"), ("c", "a"), ("p", "a")])


def two_triangles_pendants():
    return named([
        ("a1", "b1"), ("b1", "c1"), ("c1", "a1"), ("p1", "a1"),
        ("a2", "b2"), ("b2", "c2"), ("c2", "a2"), ("p2", "a2"),
    ])


def two_triangles():
    return named([(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)])


def er_graph(n, p, seed):
    """G(n, p) over ids 0..n-1 (isolated nodes kept)."""
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def er_suite(count=50, seed=12345):
    """The random graph suite used by the oracle-equivalence checks:
    n in [10, 100], p in {0.05, 0.1, 0.3}."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(10, 100)
        p = (0.05, 0.1, 0.3)[i % 3]
        out.append(er_graph(n, p, rng.randrange(2**31)))
    return out


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.nodes())
    h.add_edges_from(g.edges())
    return h


def ids(g, *labels):
    return [g.node_of(x) for x in labels]


@pytest.fixture
def g_csx():
    return csx()


@pytest.fixture(scope="session")
def suite():
    return er_suite()


# acceptance verdicts, printed once at the end of the session
VERDICTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[n])
