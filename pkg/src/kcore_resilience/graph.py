"""Undirected simple graph over dense integer node ids, plus edge-list ingestion."""

from __future__ import annotations

import io
import logging
from typing import Hashable, Iterable, Iterator

from .errors import EmptyGraphError, GraphParseError, InvalidChangeError, InvalidNodeError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Canonical (smaller id first) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph with nodes ``0..n-1``.

    Original labels (as read from a file) are kept in :attr:`labels`;
    ``labels[i]`` is the label of node ``i``.  Graphs built by the library are
    treated as immutable; :meth:`add_edge` / :meth:`remove_edge` exist for
    code that owns a private copy and applies a sequence of changes to it.
    """

    __slots__ = ("adj", "labels", "_index", "_m")

    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = (), labels=None):
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.labels: list[Hashable] = list(range(n)) if labels is None else list(labels)
        if len(self.labels) != n:
            raise ValueError("labels must have one entry per node")
        self._index = None
        self._m = 0
        for u, v in edges:
            if u == v:
                continue
            self._check(u)
            self._check(v)
            if v not in self.adj[u]:
                self.adj[u].add(v)
                self.adj[v].add(u)
                self._m += 1

    @classmethod
    def from_labeled_edges(cls, pairs: Iterable[tuple[Hashable, Hashable]]) -> "Graph":
        """Build a graph from label pairs; ids are assigned by first appearance."""
        index: dict[Hashable, int] = {}
        mapped = []
        for a, b in pairs:
            for x in (a, b):
                if x not in index:
                    index[x] = len(index)
            mapped.append((index[a], index[b]))
        g = cls(len(index), mapped, labels=list(index))
        g._index = index
        return g

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return self._m

    node_count = n
    edge_count = m

    def __len__(self):
        return len(self.adj)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def _check(self, u):
        if not (isinstance(u, int) and 0 <= u < len(self.adj)):
            raise InvalidNodeError(f"invalid node id {u!r}")

    def nodes(self) -> range:
        return range(len(self.adj))

    def neighbors(self, u: int) -> set[int]:
        self._check(u)
        return self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < len(self.adj) and v in self.adj[u]

    def edges(self) -> Iterator[Edge]:
        """Each undirected edge once, as ``(u, v)`` with ``u < v``, in id order."""
        for u, nbrs in enumerate(self.adj):
            for v in sorted(nbrs):
                if u < v:
                    yield (u, v)

    def node_of(self, label: Hashable) -> int:
        """Node id for an original label."""
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._index[label]
        except KeyError:
            raise InvalidNodeError(f"unknown node label {label!r}") from None

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.adj = [set(a) for a in self.adj]
        g.labels = list(self.labels)
        g._index = self._index
        g._m = self._m
        return g

    def add_edge(self, u: int, v: int) -> None:
        self._check(u)
        self._check(v)
        if u == v:
            raise InvalidChangeError(f"self-loop ({u}, {v})")
        if v in self.adj[u]:
            raise InvalidChangeError(f"edge ({u}, {v}) already present")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self._m += 1

    def remove_edge(self, u: int, v: int) -> None:
        self._check(u)
        self._check(v)
        if v not in self.adj[u]:
            raise InvalidChangeError(f"edge ({u}, {v}) not present")
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self._m -= 1


def _parse_label(token: str):
    try:
        return int(token)
    except ValueError:
        return None


def load_edge_list(source, strict: bool = False) -> Graph:
    """Read a whitespace-separated edge list.

    ``source`` may be a path (``str`` or ``os.PathLike``), a text/binary
    file object, or raw ``bytes``; use :func:`loads` for a string of edge
    list text.  Lines starting with ``#`` or ``%``
    are comments; tokens past the second on a line (weights, timestamps)
    are ignored.  Labels must be integers.  In lenient mode malformed lines
    are skipped and counted; in strict mode the first one raises
    :class:`GraphParseError`.  Self-loops are dropped and duplicate edges
    collapsed.
    """
    text = _read_text(source)
    pairs = []
    skipped = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        a = _parse_label(parts[0]) if parts else None
        b = _parse_label(parts[1]) if len(parts) > 1 else None
        if a is None or b is None:
            if strict:
                raise GraphParseError(f"expected two integer node labels, got {line!r}", lineno)
            skipped += 1
            continue
        pairs.append((a, b))
    if skipped:
        logger.warning("skipped %d malformed line(s)", skipped)
    if not pairs:
        raise EmptyGraphError("edge list contains no edges")
    return Graph.from_labeled_edges(pairs)


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode()
    if hasattr(source, "read"):
        data = source.read()
        return data.decode() if isinstance(data, bytes) else data
    with open(source) as fh:
        return fh.read()


def loads(text: str, strict: bool = False) -> Graph:
    """Parse edge-list text (never treated as a path)."""
    return load_edge_list(io.StringIO(text), strict=strict)
