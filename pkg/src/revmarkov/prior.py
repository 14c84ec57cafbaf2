"""The conjugate prior density on edge-weight simplices.

The density of a reversible chain's edge weights ``x`` given a start vertex
``v0`` and positive edge parameters ``a`` is, up to the constant ``Z``,

    prod_{e non-loop} x_e^(a_e - 1/2) * prod_{e loop} x_e^(a_e/2 - 1)
    / (x_{v0}^(a_{v0}/2) * prod_{v != v0} x_v^((a_v + 1)/2))
    * sqrt(det A(x))

with ``A(x)`` the cycle matrix of inverse edge weights over a fundamental
cycle basis.  Densities are with respect to Lebesgue measure on the simplex
scaled to total mass one, i.e. a uniform simplex point has density 1.

Specialised closed forms for line graphs, trees with loops, the triangle
with loops and complete graphs with loops are kept as separate code paths so
that they can check the general formula.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import GraphError, InputError, NumericalDomainError
from .graph import Graph, OrientedCycle, cycle_basis, enumerate_spanning_trees
from .logvalue import LogValue
from .paths import SimplexPoint

BOUNDARY_EPS = 1e-300

__all__ = [
    "PriorParams",
    "cycle_sign_matrix",
    "cycle_matrix",
    "det_cycle_matrix",
    "log_det_cycle_matrix",
    "log_partition",
    "log_density",
    "log_density_many",
    "specialized_log_density",
    "line_log_density",
    "tree_with_loops_log_density",
    "triangle_with_loops_log_density",
    "complete_with_loops_log_density",
    "sample_uniform_simplex",
]


@dataclass(frozen=True)
class PriorParams:
    """Start vertex and positive edge parameters of a prior (or posterior)."""

    graph: Graph
    v0: int
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.shape != (self.graph.num_edges,):
            raise InputError(f"expected {self.graph.num_edges} edge parameters, got shape {a.shape}")
        if np.any(~np.isfinite(a)) or np.any(a <= 0):
            raise InputError("edge parameters must be strictly positive")
        if not 0 <= self.v0 < self.graph.num_vertices:
            raise InputError(f"start vertex {self.v0} not in graph")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def uniform(cls, graph: Graph, v0: int = 0, value: float = 1.0) -> "PriorParams":
        return cls(graph, v0, np.full(graph.num_edges, float(value)))

    @property
    def vertex_weights(self) -> np.ndarray:
        return self.graph.vertex_sums(self.a)

    def __eq__(self, other):
        if not isinstance(other, PriorParams):
            return NotImplemented
        return self.graph == other.graph and self.v0 == other.v0 and np.array_equal(self.a, other.a)

    __hash__ = None


def cycle_sign_matrix(g: Graph, basis: list[OrientedCycle]) -> np.ndarray:
    """Cycles x edges matrix of +1/-1 traversal orientations (0 off-cycle)."""
    c = np.zeros((len(basis), g.num_edges))
    for i, cyc in enumerate(basis):
        for e, fwd in cyc.steps:
            c[i, e] = 1.0 if fwd else -1.0
    return c


def cycle_matrix(g: Graph, basis: list[OrientedCycle], x: SimplexPoint) -> np.ndarray:
    """A(x): inverse weights summed over shared edges, signed by relative orientation."""
    c = cycle_sign_matrix(g, basis)
    return (c / x.x) @ c.T


def _log_det_spd(a: np.ndarray) -> np.ndarray:
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-2])
    chol = np.linalg.cholesky(a)
    return 2.0 * np.log(np.diagonal(chol, axis1=-2, axis2=-1)).sum(axis=-1)


def log_det_cycle_matrix(g: Graph, x: SimplexPoint, basis=None) -> float:
    if basis is None:
        basis = cycle_basis(g)
    return float(_log_det_spd(cycle_matrix(g, basis, x)))


def det_cycle_matrix(g: Graph, x: SimplexPoint, method: str = "matrix", basis=None, cap=None) -> float:
    """det A(x), either from the matrix or as the spanning-tree sum.

    The tree sum is ``sum_T prod_{e not in T} 1/x_e``; loops lie in every
    tree, so they never contribute.  An empty cycle basis gives 1.
    """
    if method == "matrix":
        return math.exp(log_det_cycle_matrix(g, x, basis))
    if method == "spanning-trees":
        trees = enumerate_spanning_trees(g) if cap is None else enumerate_spanning_trees(g, cap)
        inv = 1.0 / x.x
        total = 0.0
        for t in trees:
            prod = 1.0
            for e in range(g.num_edges):
                if e not in t:
                    prod *= inv[e]
            total += prod
        return total
    raise ValueError(f"unknown determinant method {method!r}")


def log_partition(params: PriorParams) -> LogValue:
    """log Z_{v0,a}, the normaliser of the prior density."""
    g = params.graph
    a = params.a
    av = params.vertex_weights
    loops = list(g.loops)
    others = [v for v in range(g.num_vertices) if v != params.v0]
    out = gammaln(a).sum()
    out -= gammaln(av[params.v0] / 2)
    out -= gammaln((av[others] + 1) / 2).sum()
    out -= gammaln((a[loops] + 1) / 2).sum()
    out += math.lgamma(g.m)  # log (m-1)!
    out += (g.l - 1) / 2 * math.log(math.pi)
    out -= (1 - g.l + a.sum()) * math.log(2)
    return LogValue(float(out))


def _exponents(params: PriorParams) -> tuple[np.ndarray, np.ndarray]:
    g = params.graph
    a = params.a
    loop = np.array([g.is_loop(e) for e in range(g.num_edges)])
    edge_exp = np.where(loop, a / 2 - 1, a - 0.5)
    av = params.vertex_weights
    vert_exp = (av + 1) / 2
    vert_exp[params.v0] = av[params.v0] / 2
    return edge_exp, vert_exp


def log_density_many(params: PriorParams, xs: np.ndarray, basis=None) -> np.ndarray:
    """Vectorised log density at the rows of ``xs`` (assumed on the simplex)."""
    g = params.graph
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if np.any(xs <= BOUNDARY_EPS):
        raise NumericalDomainError("density is only defined strictly inside the simplex")
    if basis is None:
        basis = cycle_basis(g)
    edge_exp, vert_exp = _exponents(params)
    inc = g.incidence()
    logx = np.log(xs)
    logxv = np.log(xs @ inc.T)
    c = cycle_sign_matrix(g, basis)
    amat = np.einsum("ie,ne,je->nij", c, 1.0 / xs, c)
    return (
        logx @ edge_exp
        - logxv @ vert_exp
        + 0.5 * _log_det_spd(amat)
        - log_partition(params).log
    )


def log_density(params: PriorParams, x: SimplexPoint, basis=None) -> LogValue:
    """log of the prior density at an interior simplex point."""
    if x.graph != params.graph:
        raise InputError("simplex point and prior live on different graphs")
    return LogValue(float(log_density_many(params, x.x[None, :], basis)[0]))


def sample_uniform_simplex(rng: np.random.Generator, size: int, dim: int) -> np.ndarray:
    """``size`` uniform points on the ``dim``-component simplex."""
    return rng.dirichlet(np.ones(dim), size=size)


# Specialised closed forms ----------------------------------------------------

def _log_beta_density(p, b1, b2):
    return (
        gammaln(b1 + b2) - gammaln(b1) - gammaln(b2)
        + (b1 - 1) * np.log(p) + (b2 - 1) * np.log1p(-p)
    )


def _log_dirichlet_density(p, b):
    p = np.asarray(p, dtype=float)
    b = np.asarray(b, dtype=float)
    return gammaln(b.sum()) - gammaln(b).sum() + ((b - 1) * np.log(p)).sum()


def line_log_density(params: PriorParams, p) -> float:
    """Density of the left-move probabilities ``p_i = z_i / (z_i + z_{i+1})``.

    On the line 0 - 1 - ... - n these are independent betas.  The split at
    each interior vertex gives the extra half to the edge pointing towards
    ``v0``; at ``v0`` itself neither side gets it.
    """
    g = params.graph
    n = g.num_vertices - 1
    if g.edges != tuple((i, i + 1) for i in range(n)):
        raise GraphError("line density needs the graph 0 - 1 - ... - n")
    b = np.concatenate([[np.nan], params.a])  # b[i] is the weight of edge {i-1, i}
    p = np.asarray(p, dtype=float)
    if p.shape != (n - 1,):
        raise InputError(f"expected {n - 1} transformed coordinates")
    v0 = params.v0
    total = 0.0
    for i in range(1, n):
        if i < v0:
            b1, b2 = b[i] / 2, (b[i + 1] + 1) / 2
        elif i == v0:
            b1, b2 = b[i] / 2, b[i + 1] / 2
        else:
            b1, b2 = (b[i] + 1) / 2, b[i + 1] / 2
        total += _log_beta_density(p[i - 1], b1, b2)
    return float(total)


def _tree_parents(g: Graph, root: int) -> dict[int, int]:
    """Edge towards ``root`` for every other vertex."""
    towards = {}
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in g.adjacency[v]:
            w = g.other_end(e, v)
            if w not in seen:
                seen.add(w)
                towards[w] = e
                queue.append(w)
    return towards


def tree_with_loops_log_density(params: PriorParams, p: dict) -> float:
    """Density of the per-vertex exit probabilities on a tree with a loop everywhere.

    ``p[v]`` lists ``x_e / x_v`` for ``e`` in ``graph.adjacency[v]`` order.
    """
    g = params.graph
    if len(g.loops) != g.num_vertices or g.cycle_rank != 0:
        raise GraphError("tree-with-loops density needs a tree with a loop at every vertex")
    towards = _tree_parents(g, params.v0)
    a = params.a
    total = 0.0
    for v in range(g.num_vertices):
        pv = np.asarray(p[v], dtype=float)
        if pv.shape != (len(g.adjacency[v]),):
            raise InputError(f"vertex {v}: expected {len(g.adjacency[v])} coordinates")
        shape = [
            (a[e] + 1) / 2 if towards.get(v) == e else a[e] / 2
            for e in g.adjacency[v]
        ]
        total += _log_dirichlet_density(pv, shape)
    return float(total)


def _is_triangle_with_loops(g: Graph) -> bool:
    return g.num_vertices == 3 and g.num_edges == 6 and len(g.loops) == 3


def triangle_with_loops_log_density(params: PriorParams, x: SimplexPoint) -> float:
    """Closed form on the triangle with loops, written around ``v0``.

    With ``v0`` playing vertex 1: ``y_i`` are the loop weights, ``z_i`` the
    weight of the edge opposite vertex i, ``b_i`` and ``c_i`` the matching
    parameters.
    """
    g = params.graph
    if not _is_triangle_with_loops(g):
        raise GraphError("graph is not a triangle with loops")
    v1 = params.v0
    v2, v3 = [v for v in range(3) if v != v1]
    order = (v1, v2, v3)

    def loop(v):
        return g.edge_id(v, v)

    def opposite(v):
        u, w = [o for o in order if o != v]
        return g.edge_id(u, w)

    y = np.array([x.x[loop(v)] for v in order])
    z = np.array([x.x[opposite(v)] for v in order])
    b = np.array([params.a[loop(v)] for v in order])
    c = np.array([params.a[opposite(v)] for v in order])
    gam = [
        (b[0] + c[1] + c[2]) / 2,
        (b[1] + c[0] + c[2] + 1) / 2,
        (b[2] + c[0] + c[1] + 1) / 2,
    ]
    log_z = (
        gammaln(c).sum() + gammaln(b / 2).sum() - gammaln(np.array(gam)).sum()
        + math.log(480 * math.pi) - c.sum() * math.log(2)
    )
    xv = [y[0] + z[1] + z[2], y[1] + z[0] + z[2], y[2] + z[0] + z[1]]
    val = (
        ((b / 2 - 1) * np.log(y)).sum()
        + ((c - 1) * np.log(z)).sum()
        + 0.5 * math.log(z[0] * z[1] + z[0] * z[2] + z[1] * z[2])
        - sum(gi * math.log(xi) for gi, xi in zip(gam, xv))
    )
    return float(val - log_z)


def complete_with_loops_log_density(params: PriorParams, x: SimplexPoint) -> float:
    """Closed form on K_n with loops, using the triangles through ``v0`` as cycles."""
    g = params.graph
    n = g.num_vertices
    if g.num_edges != n * (n + 1) // 2 or len(g.loops) != n:
        raise GraphError("graph is not a complete graph with loops")
    hub = params.v0
    a, xs = params.a, x.x
    loops = [g.edge_id(i, i) for i in range(n)]
    pairs = [g.edge_id(i, j) for i in range(n) for j in range(i + 1, n)]
    ai = params.vertex_weights
    xi = x.vertex_weights
    others = [v for v in range(n) if v != hub]
    b_total = a.sum()
    log_z = (
        gammaln(a).sum()
        - gammaln(ai[hub] / 2)
        - gammaln((ai[others] + 1) / 2).sum()
        - gammaln((a[loops] + 1) / 2).sum()
        + math.lgamma(n * (n + 1) / 2)
        + (n - 0.5) * math.log(math.pi)
        - (1 - 2 * n + b_total) * math.log(2)
    )
    # star-tree cycles hub -> i -> j -> hub
    tri = [(i, j) for k, i in enumerate(others) for j in others[k + 1:]]
    inv = 1.0 / xs
    amat = np.zeros((len(tri), len(tri)))
    for r, (i, j) in enumerate(tri):
        for s, (k, l) in enumerate(tri):
            val = 0.0
            if i == k:
                val += inv[g.edge_id(hub, i)]
            if j == l:
                val += inv[g.edge_id(hub, j)]
            if i == l:
                val -= inv[g.edge_id(hub, i)]
            if j == k:
                val -= inv[g.edge_id(hub, j)]
            if (i, j) == (k, l):
                val += inv[g.edge_id(i, j)]
            amat[r, s] = val
    val = (
        ((a[pairs] - 0.5) * np.log(xs[pairs])).sum()
        + ((a[loops] / 2 - 1) * np.log(xs[loops])).sum()
        - ai[hub] / 2 * math.log(xi[hub])
        - ((ai[others] + 1) / 2 * np.log(xi[others])).sum()
        + 0.5 * float(_log_det_spd(amat))
    )
    return float(val - log_z)


_KINDS = {
    "line": line_log_density,
    "tree-with-loops": tree_with_loops_log_density,
    "triangle-with-loops": triangle_with_loops_log_density,
    "complete": complete_with_loops_log_density,
}


def specialized_log_density(kind: str, params: PriorParams, coords) -> LogValue:
    """Closed-form log density for one of the special graph families.

    ``line`` and ``tree-with-loops`` take transformed coordinates (exit
    probabilities); the other kinds take a :class:`SimplexPoint`.
    """
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}; choose from {sorted(_KINDS)}") from None
    return LogValue(fn(params, coords))
