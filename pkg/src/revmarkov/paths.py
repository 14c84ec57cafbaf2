"""Admissible paths, their transition counts, and reversible-chain path probabilities.

The count vector ``k_e`` counts undirected traversals of each edge, with loop
traversals counted twice; ``k_v`` counts departures from each vertex.  Given
the start vertex, ``k_e`` alone determines the probability of a path under
every reversible chain, which is what makes it sufficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceededError, InadmissiblePathError, InputError
from .graph import Graph
from .logvalue import LogValue

SIMPLEX_TOL = 1e-12
DEFAULT_ENUM_CAP = 12

__all__ = [
    "Path",
    "TransitionCounts",
    "SimplexPoint",
    "make_path",
    "transition_counts",
    "departures_from_edge_counts",
    "markov_path_log_prob",
    "sequential_path_log_prob",
    "enumerate_equivalent_paths",
    "enumerate_paths",
    "realize_path",
]


@dataclass(frozen=True)
class Path:
    graph: Graph
    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise InadmissiblePathError("a path needs at least one vertex")
        g = self.graph
        for v in self.vertices:
            if not 0 <= v < g.num_vertices:
                raise InadmissiblePathError(f"vertex index {v} not in graph")
        for i, (a, b) in enumerate(zip(self.vertices, self.vertices[1:]), start=1):
            if g.edge_id(a, b) is None:
                raise InadmissiblePathError(
                    f"step {i}: no edge between {g.labels[a]!r} and {g.labels[b]!r}",
                    step=i,
                )

    @property
    def n(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __add__(self, other: "Path") -> "Path":
        """Concatenate paths sharing the junction vertex."""
        if other.start != self.end:
            raise InadmissiblePathError("second path must start where the first ends")
        return Path(self.graph, self.vertices + other.vertices[1:])

    def labels(self) -> tuple:
        return tuple(self.graph.labels[v] for v in self.vertices)


def make_path(g: Graph, labels: Sequence) -> Path:
    return Path(g, tuple(g.index(lab) for lab in labels))


@dataclass(frozen=True)
class TransitionCounts:
    graph: Graph
    k_edges: tuple[int, ...]
    k_vertices: tuple[int, ...]
    start: int
    end: int

    def __post_init__(self):
        g = self.graph
        if len(self.k_edges) != g.num_edges or len(self.k_vertices) != g.num_vertices:
            raise InputError("count vectors do not match the graph")
        if any(k < 0 for k in self.k_edges) or any(k < 0 for k in self.k_vertices):
            raise InputError("counts must be nonnegative")
        for e in g.loops:
            if self.k_edges[e] % 2:
                raise InputError(f"loop {g.edge_label(e)} has odd count")

    @property
    def n(self) -> int:
        g = self.graph
        return sum(k // 2 if g.is_loop(e) else k for e, k in enumerate(self.k_edges))

    def k_edge(self, u_label, v_label) -> int:
        g = self.graph
        return self.k_edges[g.edge_id(g.index(u_label), g.index(v_label))]

    def k_vertex(self, label) -> int:
        return self.k_vertices[self.graph.index(label)]


def departures_from_edge_counts(g: Graph, k_edges: Sequence[int], start: int, end: int) -> tuple[int, ...]:
    """Recover ``k_v`` from ``k_e`` and the endpoints.

    Every departure from or arrival at ``v`` is one end of a traversal, and a
    loop traversal supplies both, so the incident sum with loop counts taken
    in full (they are already doubled) is ``2 k_v - [v = start] + [v = end]``.
    """
    out = []
    for v in range(g.num_vertices):
        total = sum(k_edges[e] for e in g.adjacency[v])
        total += (v == start) - (v == end)
        if total % 2:
            raise InputError("edge counts are inconsistent with the given endpoints")
        out.append(total // 2)
    return tuple(out)


def transition_counts(p: Path) -> TransitionCounts:
    g = p.graph
    k_e = [0] * g.num_edges
    k_v = [0] * g.num_vertices
    for a, b in zip(p.vertices, p.vertices[1:]):
        e = g.edge_id(a, b)
        k_e[e] += 2 if a == b else 1
        k_v[a] += 1
    return TransitionCounts(g, tuple(k_e), tuple(k_v), p.start, p.end)


@dataclass(frozen=True)
class SimplexPoint:
    """Positive edge weights summing to one."""

    graph: Graph
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.shape != (self.graph.num_edges,):
            raise InputError(f"expected {self.graph.num_edges} edge weights, got {x.shape}")
        if np.any(~np.isfinite(x)) or np.any(x <= 0):
            raise InputError("edge weights must be strictly positive")
        if abs(math.fsum(x) - 1.0) > SIMPLEX_TOL:
            raise InputError(f"edge weights sum to {math.fsum(x)!r}, not 1")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @classmethod
    def normalized(cls, graph: Graph, weights) -> "SimplexPoint":
        w = np.asarray(weights, dtype=float)
        return cls(graph, w / math.fsum(w))

    @property
    def vertex_weights(self) -> np.ndarray:
        return self.graph.vertex_sums(self.x)


def markov_path_log_prob(x: SimplexPoint, p: Path) -> LogValue:
    """log Q_{v0,x}(path) from the count vector, for ``v0`` the path start."""
    c = transition_counts(p)
    g = p.graph
    xv = x.vertex_weights
    total = 0.0
    for e, k in enumerate(c.k_edges):
        if k:
            total += (k / 2 if g.is_loop(e) else k) * math.log(x.x[e])
    for v, k in enumerate(c.k_vertices):
        if k:
            total -= k * math.log(xv[v])
    return LogValue(total)


def sequential_path_log_prob(x: SimplexPoint, p: Path) -> LogValue:
    """Same quantity as :func:`markov_path_log_prob`, step by step."""
    g = p.graph
    xv = x.vertex_weights
    total = 0.0
    for a, b in zip(p.vertices, p.vertices[1:]):
        total += math.log(x.x[g.edge_id(a, b)] / xv[a])
    return LogValue(total)


def enumerate_paths(g: Graph, start: int, n: int):
    """Yield every admissible vertex tuple of length ``n`` from ``start``."""
    def rec(prefix):
        if len(prefix) == n + 1:
            yield tuple(prefix)
            return
        v = prefix[-1]
        for e in g.adjacency[v]:
            prefix.append(g.other_end(e, v))
            yield from rec(prefix)
            prefix.pop()

    yield from rec([start])


def enumerate_equivalent_paths(p: Path, cap: int = DEFAULT_ENUM_CAP) -> list[Path]:
    """All paths with the same start and the same ``k_e`` vector as ``p``."""
    if p.n > cap:
        raise CapExceededError(f"path length {p.n} exceeds enumeration cap {cap}")
    g = p.graph
    remaining = list(transition_counts(p).k_edges)
    out = []

    def rec(prefix):
        if len(prefix) == p.n + 1:
            out.append(Path(g, tuple(prefix)))
            return
        v = prefix[-1]
        for e in g.adjacency[v]:
            cost = 2 if g.is_loop(e) else 1
            if remaining[e] >= cost:
                remaining[e] -= cost
                prefix.append(g.other_end(e, v))
                rec(prefix)
                prefix.pop()
                remaining[e] += cost

    rec([p.start])
    return out


def realize_path(counts: TransitionCounts) -> Path:
    """Some path with exactly these counts (Hierholzer on the count multigraph)."""
    g = counts.graph
    left = [k // 2 if g.is_loop(e) else k for e, k in enumerate(counts.k_edges)]
    pointer = [0] * g.num_vertices
    stack = [counts.start]
    walk = []
    while stack:
        v = stack[-1]
        adj = g.adjacency[v]
        while pointer[v] < len(adj) and left[adj[pointer[v]]] == 0:
            pointer[v] += 1
        if pointer[v] == len(adj):
            walk.append(stack.pop())
        else:
            e = adj[pointer[v]]
            left[e] -= 1
            stack.append(g.other_end(e, v))
    walk.reverse()
    if any(left) or walk[-1] != counts.end:
        raise InputError("counts do not describe a single path between the given endpoints")
    path = Path(g, tuple(walk))
    return path
