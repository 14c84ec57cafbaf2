"""Edge-reinforced random walk: sampling, exact path probabilities, posterior simulation.

The walk starts at ``v0`` with edge weights ``a``.  Each step picks an edge
at the current vertex with probability proportional to its current weight
(a loop enters the vertex total once), moves across it, then reinforces it
by 1, or by 2 for a loop.  Its law is the mixture of reversible chains under
the conjugate prior, so many independent walks give posterior samples:
``k_e(Z_n) / n`` approximates a draw of ``x_e``.

Batches of walkers run through a compiled kernel (numba) with a pure numpy
fallback that consumes the same uniforms and yields identical counts.
Walkers are grouped in fixed-size blocks, each with its own random
substream, so the output for a seed does not depend on how blocks are
scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InputError, StartMismatchError
from .graph import Graph
from .logvalue import LogValue
from .paths import Path
from .prior import PriorParams

BLOCK_SIZE = 2048

__all__ = [
    "RandomSource",
    "ErrwState",
    "errw_sample_path",
    "errw_path_log_prob",
    "simulate_edge_counts",
    "posterior_edge_frequency_samples",
    "stationary_samples",
    "estimate_stationary",
    "empirical_cdf",
]


@dataclass(frozen=True)
class RandomSource:
    """Seeded random stream; ``substream(i)`` gives independent children."""

    seed: int
    key: tuple[int, ...] = ()

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, i: int) -> "RandomSource":
        return RandomSource(self.seed, self.key + (i,))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RandomSource):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return RandomSource(int(rng)).generator()


class ErrwState:
    """A single walker; mutable, not meant to be shared."""

    def __init__(self, params: PriorParams):
        self.graph = params.graph
        self.current = params.v0
        self.weights = np.array(params.a, dtype=float)
        self.step_count = 0

    def step_weights(self) -> tuple[tuple[int, ...], np.ndarray]:
        adj = self.graph.adjacency[self.current]
        return adj, self.weights[list(adj)]

    def traverse(self, e: int) -> None:
        g = self.graph
        self.current = g.other_end(e, self.current)
        self.weights[e] += 2.0 if g.is_loop(e) else 1.0
        self.step_count += 1


def errw_sample_path(params: PriorParams, n: int, rng) -> Path:
    """One ERRW trajectory of ``n`` steps from ``params.v0``."""
    if n < 0:
        raise InputError("number of steps must be nonnegative")
    gen = _as_generator(rng)
    state = ErrwState(params)
    visited = [state.current]
    for _ in range(n):
        adj, w = state.step_weights()
        cum = np.cumsum(w)
        i = int(np.searchsorted(cum, gen.random() * cum[-1], side="right"))
        state.traverse(adj[min(i, len(adj) - 1)])
        visited.append(state.current)
    return Path(params.graph, tuple(visited))


def errw_path_log_prob(params: PriorParams, p: Path) -> LogValue:
    """Exact log probability that the ERRW follows ``p``, step by step."""
    if p.start != params.v0:
        raise StartMismatchError(
            f"path starts at {p.graph.labels[p.start]!r}, walk starts at "
            f"{params.graph.labels[params.v0]!r}"
        )
    state = ErrwState(params)
    g = params.graph
    total = 0.0
    for b in p.vertices[1:]:
        e = g.edge_id(state.current, b)
        _, w = state.step_weights()
        total += math.log(state.weights[e] / w.sum())
        state.traverse(e)
    return LogValue(total)


def _walk_numpy(weights, traversals, current, uniforms, inc, other, last_edge, bump):
    rows = np.arange(weights.shape[0])
    for s in range(uniforms.shape[1]):
        cum = np.cumsum(weights * inc[current], axis=1)
        u = uniforms[:, s] * cum[:, -1]
        choice = np.minimum((cum <= u[:, None]).sum(axis=1), last_edge[current])
        weights[rows, choice] += bump[choice]
        traversals[rows, choice] += 1
        current[:] = other[choice, current]


def _walk_loops(weights, traversals, current, uniforms, adj_ptr, adj_edges, other, bump):
    # same selection rule as _walk_numpy: first incident edge whose running sum exceeds u
    for w in range(weights.shape[0]):
        v = current[w]
        for s in range(uniforms.shape[1]):
            lo = adj_ptr[v]
            hi = adj_ptr[v + 1]
            total = 0.0
            for j in range(lo, hi):
                total += weights[w, adj_edges[j]]
            u = uniforms[w, s] * total
            chosen = adj_edges[hi - 1]
            acc = 0.0
            for j in range(lo, hi):
                acc += weights[w, adj_edges[j]]
                if acc > u:
                    chosen = adj_edges[j]
                    break
            weights[w, chosen] += bump[chosen]
            traversals[w, chosen] += 1
            v = other[chosen, v]
        current[w] = v


try:
    import numba

    _walk_compiled = numba.njit(cache=True)(_walk_loops)
except ImportError:  # pragma: no cover
    _walk_compiled = None

STEP_CHUNK = 512


def _simulate_block(args, use_numba=True) -> np.ndarray:
    params, n, size, source = args
    g = params.graph
    gen = source.generator()
    ne = g.num_edges
    other = np.zeros((ne, g.num_vertices), dtype=np.int64)
    for e, (u, v) in enumerate(g.edges):
        other[e, u] = v
        other[e, v] = u
    bump = np.array([2.0 if g.is_loop(e) else 1.0 for e in range(ne)])
    weights = np.tile(np.asarray(params.a, dtype=float), (size, 1))
    traversals = np.zeros((size, ne), dtype=np.int64)
    current = np.full(size, params.v0, dtype=np.int64)
    fast = use_numba and _walk_compiled is not None
    if fast:
        adj_ptr = np.cumsum([0] + [len(a) for a in g.adjacency]).astype(np.int64)
        adj_edges = np.array([e for a in g.adjacency for e in a], dtype=np.int64)
    else:
        inc = g.incidence().astype(bool)
        last_edge = np.array([max(adj) for adj in g.adjacency])
    done = 0
    while done < n:
        chunk = min(STEP_CHUNK, n - done)
        uniforms = gen.random((size, chunk))
        if fast:
            _walk_compiled(weights, traversals, current, uniforms, adj_ptr, adj_edges, other, bump)
        else:
            _walk_numpy(weights, traversals, current, uniforms, inc, other, last_edge, bump)
        done += chunk
    traversals[:, bump == 2.0] *= 2
    return traversals


def simulate_edge_counts(
    params: PriorParams, n: int, m: int, rng, workers: int = 1
) -> np.ndarray:
    """``k_e(Z_n)`` for ``m`` independent walkers, shape ``(m, |E|)``.

    ``rng`` should be a :class:`RandomSource` (or an int seed); block ``i``
    uses ``rng.substream(i)``.
    """
    if n < 1 or m < 1:
        raise InputError("need at least one step and one walker")
    source = rng if isinstance(rng, RandomSource) else RandomSource(int(rng))
    jobs = []
    for i, start in enumerate(range(0, m, BLOCK_SIZE)):
        jobs.append((params, n, min(BLOCK_SIZE, m - start), source.substream(i)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_simulate_block, jobs))
    else:
        blocks = [_simulate_block(job) for job in jobs]
    return np.concatenate(blocks, axis=0)


def posterior_edge_frequency_samples(
    params: PriorParams, n: int, m: int, rng, workers: int = 1
) -> np.ndarray:
    """Per-walker ``k_e(Z_n) / n``; each row approximates a draw of ``x``."""
    return simulate_edge_counts(params, n, m, rng, workers) / n


def stationary_samples(g: Graph, edge_counts: np.ndarray, n: int) -> np.ndarray:
    """Per-walker ``nu(v) = x_v / 2`` with ``x = k / n``; rows sum to one."""
    return edge_counts @ g.incidence().T / (2.0 * n)


def estimate_stationary(
    params: PriorParams, n: int, m: int, rng, workers: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Posterior-mean stationary distribution and its per-walker samples."""
    counts = simulate_edge_counts(params, n, m, rng, workers)
    nu = stationary_samples(params.graph, counts, n)
    return nu.mean(axis=0), nu


def empirical_cdf(samples: np.ndarray):
    """Right-continuous step function ``t -> fraction of samples <= t``."""
    s = np.sort(np.asarray(samples, dtype=float))

    def cdf(t):
        return np.searchsorted(s, t, side="right") / len(s)

    return cdf
