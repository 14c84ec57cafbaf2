"""Finite undirected graphs with loops, spanning trees and cycle bases.

Vertices are dense indices ``0..|V|-1`` carrying display labels.  An edge is
stored as its endpoint pair ``(lo, hi)`` with ``lo <= hi``; a loop has
``lo == hi``.  At most one edge joins any unordered pair, so an edge and its
endpoint pair determine each other.

A *spanning tree* here contains every loop plus a loop-free acyclic spanning
subset of the other edges, so it has ``|V| - 1 + |E_loop|`` edges.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    CapExceededError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphError,
    UnknownLabelError,
)

DEFAULT_TREE_CAP = 10**6

__all__ = [
    "Graph",
    "SpanningTree",
    "OrientedCycle",
    "build_graph",
    "complete_graph",
    "line_graph",
    "kirchhoff_count",
    "enumerate_spanning_trees",
    "bfs_spanning_tree",
    "is_spanning_tree",
    "cycle_basis",
    "loop_transform",
    "lift_path",
]


@dataclass(frozen=True)
class Graph:
    labels: tuple
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    _edge_ids: dict = field(repr=False, compare=False, hash=False)
    _label_ids: dict = field(repr=False, compare=False, hash=False)

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    m = num_edges

    @property
    def loops(self) -> tuple[int, ...]:
        return tuple(e for e, (u, v) in enumerate(self.edges) if u == v)

    @property
    def l(self) -> int:  # noqa: E743
        return self.num_vertices + len(self.loops)

    @property
    def cycle_rank(self) -> int:
        """Number of independent cycles, ``m - l + 1``."""
        return self.m - self.l + 1

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def index(self, label: Hashable) -> int:
        try:
            return self._label_ids[label]
        except KeyError:
            raise UnknownLabelError(f"unknown vertex label {label!r}") from None

    def edge_id(self, u: int, v: int) -> int | None:
        """Edge joining vertex indices ``u`` and ``v``, or None."""
        return self._edge_ids.get((min(u, v), max(u, v)))

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def edge_label(self, e: int) -> str:
        u, v = self.edges[e]
        return f"{self.labels[u]}-{self.labels[v]}"

    def incidence(self) -> np.ndarray:
        """|V| x |E| 0/1 matrix; loops appear once."""
        inc = np.zeros((self.num_vertices, self.num_edges))
        for e, (u, v) in enumerate(self.edges):
            inc[u, e] = 1.0
            inc[v, e] = 1.0
        return inc

    def vertex_sums(self, edge_values) -> np.ndarray:
        """Per-vertex sums of incident edge values, loops counted once."""
        return self.incidence() @ np.asarray(edge_values, dtype=float)


def _make_graph(labels: Sequence, edges: Sequence[tuple[int, int]]) -> Graph:
    labels = tuple(labels)
    label_ids = {}
    for i, lab in enumerate(labels):
        if lab in label_ids:
            raise GraphError(f"duplicate vertex label {lab!r}")
        label_ids[lab] = i
    norm = []
    edge_ids = {}
    for u, v in edges:
        key = (min(u, v), max(u, v))
        if key in edge_ids:
            raise DuplicateEdgeError(
                f"duplicate edge {{{labels[key[0]]}, {labels[key[1]]}}}"
            )
        edge_ids[key] = len(norm)
        norm.append(key)
    if not norm:
        raise GraphError("a graph needs at least one edge")
    adj = [[] for _ in labels]
    for e, (u, v) in enumerate(norm):
        adj[u].append(e)
        if v != u:
            adj[v].append(e)
    g = Graph(labels, tuple(norm), tuple(tuple(a) for a in adj), edge_ids, label_ids)
    if not _connected(g, range(g.num_edges)):
        raise DisconnectedGraphError("graph is not connected")
    return g


def build_graph(vertex_labels: Iterable, edge_endpoint_pairs: Iterable) -> Graph:
    """Build a connected graph from labels and endpoint-label pairs.

    >>> g = build_graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    >>> g.m, g.l
    (3, 3)
    """
    labels = list(vertex_labels)
    ids = {lab: i for i, lab in enumerate(labels)}
    edges = []
    for pair in edge_endpoint_pairs:
        if len(pair) != 2:
            raise GraphError(f"edge {pair!r} must have exactly two endpoints")
        u, v = pair
        for lab in (u, v):
            if lab not in ids:
                raise UnknownLabelError(f"edge {pair!r} references unknown label {lab!r}")
        edges.append((ids[u], ids[v]))
    return _make_graph(labels, edges)


def complete_graph(labels: Sequence, loops: bool = True) -> Graph:
    """K_n over ``labels``; edges ordered (0,0),(0,1),...,(1,1),... ."""
    n = len(labels)
    edges = [(i, j) for i in range(n) for j in range(i, n) if loops or i != j]
    return _make_graph(labels, edges)


def line_graph(n: int) -> Graph:
    """Path 0 - 1 - ... - n with edge i-1 joining vertices i-1 and i."""
    return _make_graph(list(range(n + 1)), [(i, i + 1) for i in range(n)])


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def copy(self):
        uf = _UnionFind(0)
        uf.parent = list(self.parent)
        return uf


def _connected(g: Graph, edge_ids: Iterable[int]) -> bool:
    uf = _UnionFind(g.num_vertices)
    comps = g.num_vertices
    for e in edge_ids:
        u, v = g.edges[e]
        if uf.union(u, v):
            comps -= 1
    return comps == 1


def kirchhoff_count(g: Graph) -> int:
    """Number of spanning trees of the loop-free skeleton (matrix-tree theorem)."""
    n = g.num_vertices
    if n == 1:
        return 1
    lap = np.zeros((n, n))
    for u, v in g.edges:
        if u != v:
            lap[u, u] += 1
            lap[v, v] += 1
            lap[u, v] -= 1
            lap[v, u] -= 1
    return int(round(np.linalg.det(lap[1:, 1:])))


@dataclass(frozen=True)
class SpanningTree:
    edges: frozenset

    def __contains__(self, e: int) -> bool:
        return e in self.edges

    def __len__(self) -> int:
        return len(self.edges)


def is_spanning_tree(g: Graph, edge_ids: Iterable[int]) -> bool:
    edge_ids = set(edge_ids)
    if not set(g.loops) <= edge_ids:
        return False
    plain = [e for e in edge_ids if not g.is_loop(e)]
    if len(plain) != g.num_vertices - 1:
        return False
    return _connected(g, plain)


def enumerate_spanning_trees(g: Graph, cap: int = DEFAULT_TREE_CAP) -> list[SpanningTree]:
    """All spanning trees, each exactly once, by deletion/contraction.

    Raises CapExceededError when the Kirchhoff count exceeds ``cap``; callers
    then have to use the cycle-matrix determinant instead.
    """
    count = kirchhoff_count(g)
    if count > cap:
        raise CapExceededError(
            f"{count} spanning trees exceed cap {cap}; "
            "too many trees, use the cycle-matrix determinant"
        )
    loops = frozenset(g.loops)
    plain = [e for e in range(g.num_edges) if not g.is_loop(e)]
    need = g.num_vertices - 1
    out: list[SpanningTree] = []

    def rec(i, uf, chosen):
        if len(chosen) == need:
            out.append(SpanningTree(loops | frozenset(chosen)))
            return
        if len(plain) - i < need - len(chosen):
            return
        e = plain[i]
        u, v = g.edges[e]
        if uf.find(u) != uf.find(v):
            contracted = uf.copy()
            contracted.union(u, v)
            rec(i + 1, contracted, chosen + [e])
        # deleting e must leave the rest able to span
        if _connected(g, chosen + plain[i + 1:]):
            rec(i + 1, uf, chosen)

    rec(0, _UnionFind(g.num_vertices), [])
    return out


def bfs_spanning_tree(g: Graph, root: int = 0) -> SpanningTree:
    """Breadth-first spanning tree from ``root`` (plus all loops)."""
    seen = {root}
    chosen = set(g.loops)
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in g.adjacency[v]:
            w = g.other_end(e, v)
            if w not in seen:
                seen.add(w)
                chosen.add(e)
                queue.append(w)
    return SpanningTree(frozenset(chosen))


@dataclass(frozen=True)
class OrientedCycle:
    """Closed walk given as ``(edge id, forward)`` steps.

    ``forward`` is True when the step runs from the edge's lower-index
    endpoint to its higher-index endpoint.
    """

    steps: tuple[tuple[int, bool], ...]

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.steps)

    def vertices(self, g: Graph) -> tuple[int, ...]:
        e, fwd = self.steps[0]
        lo, hi = g.edges[e]
        walk = [lo if fwd else hi]
        for e, fwd in self.steps:
            lo, hi = g.edges[e]
            walk.append(hi if fwd else lo)
        return tuple(walk)


def cycle_basis(g: Graph, tree: SpanningTree | None = None) -> list[OrientedCycle]:
    """Fundamental cycles of ``tree``, one per non-tree, non-loop edge.

    Each cycle traverses its defining edge from the lower to the higher
    vertex index and returns along the tree.
    """
    if tree is None:
        tree = bfs_spanning_tree(g)
    elif not is_spanning_tree(g, tree.edges):
        raise GraphError("not a spanning tree of the graph")
    parent: dict[int, tuple[int, int] | None] = {0: None}
    depth = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e in g.adjacency[v]:
            if e in tree and not g.is_loop(e):
                w = g.other_end(e, v)
                if w not in parent:
                    parent[w] = (v, e)
                    depth[w] = depth[v] + 1
                    queue.append(w)

    def step(e, a):
        # edge e traversed starting at vertex a
        return (e, g.edges[e][0] == a)

    cycles = []
    for e, (u, w) in enumerate(g.edges):
        if u == w or e in tree:
            continue
        # tree path w -> u via the lowest common ancestor
        up_w, up_u = [], []
        a, b = w, u
        while depth[a] > depth[b]:
            p, pe = parent[a]
            up_w.append(step(pe, a))
            a = p
        while depth[b] > depth[a]:
            p, pe = parent[b]
            up_u.append(step(pe, p))
            b = p
        while a != b:
            p, pe = parent[a]
            up_w.append(step(pe, a))
            a = p
            q, qe = parent[b]
            up_u.append(step(qe, q))
            b = q
        cycles.append(OrientedCycle(((e, True),) + tuple(up_w) + tuple(reversed(up_u))))
    return cycles


def loop_transform(g: Graph) -> tuple[Graph, dict[int, int], dict[int, int]]:
    """Replace each loop by a pendant edge to a fresh vertex.

    Returns ``(g2, edge_map, vertex_map)``: ``edge_map`` sends every edge id
    of ``g`` to its id in ``g2`` (ids are preserved), and ``vertex_map``
    sends each loop id to the index of its new pendant vertex.
    """
    labels = list(g.labels)
    taken = set(labels)
    edges = []
    vertex_map = {}
    for e, (u, v) in enumerate(g.edges):
        if u != v:
            edges.append((u, v))
            continue
        lab = f"{g.labels[u]}'"
        while lab in taken:
            lab += "'"
        taken.add(lab)
        vertex_map[e] = len(labels)
        labels.append(lab)
        edges.append((u, vertex_map[e]))
    g2 = _make_graph(labels, edges)
    return g2, {e: e for e in range(g.num_edges)}, vertex_map


def lift_path(g: Graph, vertices: Sequence[int], vertex_map: dict[int, int]) -> tuple[int, ...]:
    """Map a path on ``g`` to the loop-transformed graph.

    Each loop traversal at ``v`` becomes the excursion ``v, v', v``.
    """
    out = [vertices[0]]
    for a, b in zip(vertices, vertices[1:]):
        if a == b:
            out.append(vertex_map[g.edge_id(a, a)])
        out.append(b)
    return tuple(out)


def triangles_through(n: int, hub: int = 0) -> list[tuple[int, int, int]]:
    """Triangles (hub, i, j) of K_n, i < j, both distinct from hub."""
    others = [v for v in range(n) if v != hub]
    return [(hub, i, j) for i, j in combinations(others, 2)]
