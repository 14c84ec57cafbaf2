"""Shared graph builders, hypothesis strategies and the fixed graph corpus."""
from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st
from scipy.special import gammaln

from revmarkov.graph import build_graph, complete_graph
from revmarkov.paths import Path, SimplexPoint
from revmarkov.prior import PriorParams


def triangle():
    """Loop-free triangle, edges in the order {1,2}, {2,3}, {1,3}."""
    return build_graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])


def triangle_with_loops():
    return complete_graph([1, 2, 3], loops=True)


def random_connected_graph(rng: np.random.Generator, n: int, extra: float, loop_prob: float):
    """Random tree plus extra edges, with loops attached at random."""
    order = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(i)])
        edges.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
        if rng.random() < loop_prob:
            edges.add((u, u))
    if not edges:
        edges.add((0, 0))
    return build_graph(range(n), sorted(edges))


def graph_corpus(size: int = 50, seed: int = 2006):
    """Fixed corpus of connected graphs on at most 6 vertices.

    K4 comes first; after it graphs alternate between carrying at least one
    loop and carrying none.
    """
    rng = np.random.default_rng(seed)
    corpus = [complete_graph(range(4), loops=False)]
    while len(corpus) < size:
        n = int(rng.integers(2, 7))
        loops = len(corpus) % 2 == 0
        g = random_connected_graph(rng, n, extra=float(rng.uniform(0.2, 0.9)), loop_prob=0.5 if loops else 0.0)
        if g.num_edges >= 2 and bool(g.loops) == loops:
            corpus.append(g)
    return corpus


def random_point(rng: np.random.Generator, g) -> SimplexPoint:
    return SimplexPoint(g, rng.dirichlet(np.ones(g.num_edges)))


def random_walk(rng: np.random.Generator, g, start: int, n: int) -> Path:
    vertices = [start]
    for _ in range(n):
        adj = g.adjacency[vertices[-1]]
        vertices.append(g.other_end(adj[rng.integers(len(adj))], vertices[-1]))
    return Path(g, tuple(vertices))


@st.composite
def graphs(draw, max_vertices: int = 5, loops: bool | None = None):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1 if loops is not False else 2, max_vertices))
    extra = draw(st.floats(0.0, 1.0))
    if loops is None:
        loop_prob = draw(st.sampled_from([0.0, 0.5, 1.0]))
    else:
        loop_prob = 0.6 if loops else 0.0
    return random_connected_graph(np.random.default_rng(seed), n, extra, loop_prob)


@st.composite
def priors(draw, max_vertices: int = 5, loops: bool | None = None):
    g = draw(graphs(max_vertices, loops))
    v0 = draw(st.integers(0, g.num_vertices - 1))
    a = draw(st.lists(st.floats(0.2, 5.0), min_size=g.num_edges, max_size=g.num_edges))
    return PriorParams(g, v0, np.array(a))


@st.composite
def walks(draw, params_strategy=None, max_steps: int = 8):
    params = draw(params_strategy if params_strategy is not None else priors())
    n = draw(st.integers(0, max_steps))
    seed = draw(st.integers(0, 2**32 - 1))
    return params, random_walk(np.random.default_rng(seed), params.graph, params.v0, n)


def triangle_oracle(a, x):
    """Loop-free triangle density written out by hand, start vertex 1.

    Edges {1,2}, {2,3}, {1,3} carry x, y, z and parameters a, b, c.
    """
    (pa, pb, pc), (px, py, pz) = a, x
    log_z = (
        gammaln(pa) + gammaln(pb) + gammaln(pc)
        - gammaln((pa + pc) / 2) - gammaln((pa + pb + 1) / 2) - gammaln((pb + pc + 1) / 2)
        + math.log(2 * math.pi) - (pa + pb + pc - 2) * math.log(2)
    )
    return (
        (pa - 0.5) * math.log(px) + (pb - 0.5) * math.log(py) + (pc - 0.5) * math.log(pz)
        - (pa + pc) / 2 * math.log(px + pz)
        - (pa + pb + 1) / 2 * math.log(px + py)
        - (pb + pc + 1) / 2 * math.log(py + pz)
        + 0.5 * math.log(1 / px + 1 / py + 1 / pz)
        - log_z
    )
