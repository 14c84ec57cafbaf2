"""Posterior updates, marginal likelihoods and Bayes-factor model comparison.

Four models for a symbol sequence are compared through their marginal
likelihoods:

* ``iid-uniform``: i.i.d. symbols with known uniform probabilities;
* ``iid-dirichlet``: i.i.d. with a Dirichlet prior on the symbol law;
* ``reversible``: a reversible chain on the complete graph with loops,
  with the conjugate edge-weight prior;
* ``full-markov``: an unrestricted chain with independent Dirichlet rows.

Rising factorials are evaluated as log-gamma differences, never as float
products, so magnitudes like 10^-2000 keep 12+ significant digits.  Passing
``dps`` switches to mpmath at that many decimal digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath
import numpy as np
from scipy.special import gammaln

from .errors import InputError, NumericalDomainError, StartMismatchError
from .formatting import format_log10
from .graph import Graph, complete_graph
from .logvalue import LogValue
from .paths import TransitionCounts, departures_from_edge_counts
from .prior import PriorParams

VARIANTS = ("iid-uniform", "iid-dirichlet", "reversible", "full-markov")
MODEL_ALIASES = {
    "iid-uniform": "iid-uniform",
    "iid": "iid-dirichlet",
    "iid-dirichlet": "iid-dirichlet",
    "rev": "reversible",
    "reversible": "reversible",
    "markov": "full-markov",
    "full-markov": "full-markov",
}

__all__ = [
    "CountTable",
    "ModelSpec",
    "BayesTestReport",
    "DiagnosticsReport",
    "posterior_update",
    "reversible_counts",
    "log_marginal_reversible",
    "moment_back_forth",
    "log_marginal_competitor",
    "bayes_factor",
    "run_bayes_tests",
    "reversibility_diagnostics",
]


class _Lgamma:
    """log-gamma and friends, in float64 (scipy) or mpmath at ``dps`` digits."""

    def __init__(self, dps=None):
        self.dps = dps

    def lgamma(self, z):
        if self.dps is None:
            return float(gammaln(z))
        return mpmath.loggamma(mpmath.mpf(z))

    def log(self, z):
        return math.log(z) if self.dps is None else mpmath.log(mpmath.mpf(z))

    def zero(self):
        return 0.0 if self.dps is None else mpmath.mpf(0)

    def rising(self, a, k):
        """log prod_{i<k} (a + i)."""
        if k == 0:
            return self.zero()
        return self.lgamma(a + k) - self.lgamma(a)

    def rising2(self, a, k):
        """log prod_{i<k} (a + 2i)."""
        if k == 0:
            return self.zero()
        return k * self.log(2) + self.lgamma(a / 2 + k) - self.lgamma(a / 2)


def _run(dps, fn):
    if dps is None:
        return fn(_Lgamma())
    with mpmath.workdps(dps):
        return fn(_Lgamma(dps))


# Count tables -----------------------------------------------------------------

@dataclass(frozen=True)
class CountTable:
    """Directed bigram counts ``N[i, j]`` of one sequence, with its endpoints.

    ``start``/``end`` are symbol indices.  When left as None they are
    inferred from the row/column imbalance if that pins them down.
    """

    symbols: tuple
    N: np.ndarray
    start: int | None = None
    end: int | None = None

    def __post_init__(self):
        n = np.asarray(self.N)
        if n.ndim != 2 or n.shape[0] != n.shape[1] or n.shape[0] != len(self.symbols):
            raise InputError("count table must be square and match its symbols")
        if np.any(n < 0) or not np.all(np.equal(np.mod(n, 1), 0)):
            raise InputError("count table entries must be nonnegative integers")
        n = n.astype(np.int64)
        n.setflags(write=False)
        object.__setattr__(self, "N", n)
        object.__setattr__(self, "symbols", tuple(self.symbols))
        start, end = self._check_endpoints(self.start, self.end)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    def _check_endpoints(self, start, end):
        net = self.N.sum(axis=1) - self.N.sum(axis=0)  # departures minus arrivals
        pos = np.flatnonzero(net > 0)
        neg = np.flatnonzero(net < 0)
        if np.any(np.abs(net) > 1) or len(pos) > 1 or len(neg) > 1 or len(pos) != len(neg):
            raise InputError("count table is not the bigram table of a single sequence")
        if len(pos):
            inferred = (int(pos[0]), int(neg[0]))
            if (start is not None and start != inferred[0]) or (end is not None and end != inferred[1]):
                raise InputError(
                    f"table implies start {self.symbols[inferred[0]]!r} and end "
                    f"{self.symbols[inferred[1]]!r}, contradicting the given endpoints"
                )
            return inferred
        # closed sequence: start == end, and nothing in the table says which
        if start is not None and end is not None and start != end:
            raise InputError("balanced table requires start == end")
        s = start if start is not None else end
        return s, s

    @classmethod
    def from_sequence(cls, symbols: Sequence, seq: Sequence) -> "CountTable":
        idx = {s: i for i, s in enumerate(symbols)}
        n = np.zeros((len(symbols), len(symbols)), dtype=np.int64)
        for a, b in zip(seq, seq[1:]):
            n[idx[a], idx[b]] += 1
        return cls(tuple(symbols), n, idx[seq[0]], idx[seq[-1]])

    def index(self, symbol) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise InputError(f"unknown symbol {symbol!r}") from None

    def with_endpoints(self, start=None, end=None) -> "CountTable":
        s = self.index(start) if start is not None else self.start
        e = self.index(end) if end is not None else self.end
        return CountTable(self.symbols, self.N, s, e)

    def require_endpoints(self):
        if self.start is None or self.end is None:
            raise InputError(
                "start/end symbols are not recoverable from a balanced table; pass them explicitly"
            )

    @property
    def transitions(self) -> int:
        return int(self.N.sum())

    @property
    def length(self) -> int:
        """Number of symbols in the sequence."""
        return self.transitions + 1

    @property
    def departures(self) -> np.ndarray:
        return self.N.sum(axis=1)

    @property
    def symbol_counts(self) -> np.ndarray:
        """Occurrences of each symbol in the whole sequence."""
        self.require_endpoints()
        counts = self.N.sum(axis=0).copy()
        counts[self.start] += 1
        return counts


def reversible_counts(table: CountTable, graph: Graph | None = None) -> TransitionCounts:
    """Undirected counts on the complete graph with loops.

    ``k_{i,j} = N_ij + N_ji`` off the diagonal and ``k_{i} = 2 N_ii`` on it.
    """
    table.require_endpoints()
    g = graph if graph is not None else complete_graph(table.symbols, loops=True)
    if tuple(g.labels) != table.symbols:
        raise InputError("graph vertices must match the table symbols")
    k_e = [0] * g.num_edges
    for i in range(len(table.symbols)):
        for j in range(i, len(table.symbols)):
            count = 2 * table.N[i, i] if i == j else table.N[i, j] + table.N[j, i]
            e = g.edge_id(i, j)
            if e is None:
                if count:
                    raise InputError(
                        f"transition {table.symbols[i]}{table.symbols[j]} observed but not in graph"
                    )
                continue
            k_e[e] = int(count)
    k_v = departures_from_edge_counts(g, k_e, table.start, table.end)
    if list(k_v) != [int(k) for k in table.departures]:
        raise InputError("departure counts disagree with the table")
    return TransitionCounts(g, tuple(k_e), k_v, table.start, table.end)


# Reversible model ---------------------------------------------------------------

def posterior_update(params: PriorParams, counts: TransitionCounts) -> PriorParams:
    """Conjugate update: ``a_e + k_e`` and the walk restarts at the last state."""
    if counts.start != params.v0:
        raise StartMismatchError("observations must start at the prior's start vertex")
    if counts.graph != params.graph:
        raise InputError("counts and prior live on different graphs")
    return PriorParams(params.graph, counts.end, params.a + np.asarray(counts.k_edges, dtype=float))


def log_marginal_reversible(
    params: PriorParams,
    counts: TransitionCounts,
    closed_cycle_avoiding_v0: bool = False,
    dps: int | None = None,
) -> LogValue:
    """log of the prior-mixture probability of an observed path.

    Numerator: rising products ``(a_e + i)`` over non-loop edges and
    ``(a_e + 2i)`` up to ``k_e / 2`` over loops.  Denominator: ``(a_v0 + 2i)``
    at the start vertex and ``(a_v + 1 + 2i)`` elsewhere.  With
    ``closed_cycle_avoiding_v0`` the path is a closed walk not touching
    ``v0`` and every vertex takes the ``a_v + 1`` form.
    """
    g = params.graph
    if counts.graph != g:
        raise InputError("counts and prior live on different graphs")
    if closed_cycle_avoiding_v0:
        if counts.start != counts.end or counts.start == params.v0:
            raise InputError("flagged variant needs a closed path with start != v0")
        if counts.k_vertices[params.v0] or any(counts.k_edges[e] for e in g.adjacency[params.v0]):
            raise InputError("flagged variant needs a path avoiding v0")
    elif counts.start != params.v0:
        raise StartMismatchError("path must start at the prior's start vertex")
    a = [float(x) for x in params.a]
    av = [float(x) for x in params.vertex_weights]

    def compute(lg):
        total = lg.zero()
        for e, k in enumerate(counts.k_edges):
            total += lg.rising2(a[e], k // 2) if g.is_loop(e) else lg.rising(a[e], k)
        for v, k in enumerate(counts.k_vertices):
            if v == params.v0 and not closed_cycle_avoiding_v0:
                total -= lg.rising2(av[v], k)
            else:
                total -= lg.rising2(av[v] + 1, k)
        return LogValue(total)

    return _run(dps, compute)


def moment_back_forth(params: PriorParams, e0: int) -> float:
    """Prior expectation of ``x_e0^2 / (x_v x_v')``, or ``x_e0 / x_v`` for a loop."""
    g = params.graph
    a = float(params.a[e0])
    av = params.vertex_weights
    v, w = g.edges[e0]
    if v == w:
        return a / av[v] if v == params.v0 else a / (av[v] + 1)
    if params.v0 in (v, w):
        other = w if v == params.v0 else v
        return a * (a + 1) / (av[params.v0] * (av[other] + 1))
    return a * (a + 1) / ((av[v] + 1) * (av[w] + 1))


# Competitor models ---------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    """One hypothesis: a variant plus its hyperparameters.

    ``alpha`` is a per-symbol vector (iid-dirichlet) or a matrix of per-cell
    row parameters (full-markov); a scalar broadcasts.  ``prior_value`` is
    the common edge parameter for the reversible variant unless ``params``
    is given.
    """

    variant: str
    alpha: object = 1.0
    prior_value: float = 1.0
    params: PriorParams | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InputError(f"unknown model variant {self.variant!r}")
        if np.any(np.asarray(self.alpha, dtype=float) <= 0) or self.prior_value <= 0:
            raise InputError("hyperparameters must be strictly positive")

    @classmethod
    def named(cls, name: str, **kw) -> "ModelSpec":
        try:
            return cls(MODEL_ALIASES[name], **kw)
        except KeyError:
            raise InputError(f"unknown model {name!r}; choose from {sorted(MODEL_ALIASES)}") from None


def _reversible_params(model: ModelSpec, counts: TransitionCounts) -> PriorParams:
    if model.params is not None:
        if model.params.graph != counts.graph:
            raise InputError("reversible prior graph does not match the data alphabet")
        return model.params
    return PriorParams.uniform(counts.graph, counts.start, model.prior_value)


def log_marginal_competitor(
    model: ModelSpec, table: CountTable, n: int | None = None, dps: int | None = None
) -> LogValue:
    """log P(data | model) for a sequence summarised by ``table``.

    ``n`` is the number of symbols (defaults to the table's sequence length).
    """
    k = len(table.symbols)
    n = table.length if n is None else n
    if model.variant == "iid-uniform":
        return _run(dps, lambda lg: LogValue(-n * lg.log(k)))
    if model.variant == "reversible":
        counts = reversible_counts(table)
        return log_marginal_reversible(_reversible_params(model, counts), counts, dps=dps)
    if model.variant == "iid-dirichlet":
        counts = table.symbol_counts
        if counts.sum() != n:
            raise InputError(f"table describes {counts.sum()} symbols, not {n}")
        alpha = np.broadcast_to(np.asarray(model.alpha, dtype=float), (k,))

        def iid(lg):
            total = lg.lgamma(alpha.sum()) - lg.lgamma(n + alpha.sum())
            for c, al in zip(counts, alpha):
                total += lg.lgamma(int(c) + al) - lg.lgamma(al)
            return LogValue(total)

        return _run(dps, iid)
    alpha = np.broadcast_to(np.asarray(model.alpha, dtype=float), (k, k))

    def markov(lg):
        total = lg.zero()
        for i in range(k):
            row = alpha[i]
            total += lg.lgamma(row.sum()) - lg.lgamma(int(table.N[i].sum()) + row.sum())
            for j in range(k):
                total += lg.lgamma(int(table.N[i, j]) + row[j]) - lg.lgamma(row[j])
        return LogValue(total)

    return _run(dps, markov)


def bayes_factor(h0: LogValue, h1: LogValue, sig: int = 6) -> tuple[float, str]:
    """``P(data|H0) / P(data|H1)`` as (log10, formatted string)."""
    if h0.is_zero or h1.is_zero:
        raise NumericalDomainError("Bayes factor needs two nonzero marginal likelihoods")
    ratio = h0 / h1
    return float(ratio.log10), format_log10(ratio, sig)


@dataclass
class BayesTestReport:
    marginals: dict[str, LogValue]
    factors: dict[tuple[str, str], LogValue] = field(default_factory=dict)
    sig: int = 6

    def as_pairs(self) -> list[tuple[str, str]]:
        out = []
        for name, lv in self.marginals.items():
            out.append((f"logml.{name}", repr(float(lv.log))))
            out.append((f"ml.{name}", format_log10(lv, min(16, max(self.sig, 10)))))
        for (h0, h1), lv in self.factors.items():
            out.append((f"bf.{h0}_vs_{h1}", format_log10(lv, self.sig)))
            out.append((f"log10bf.{h0}_vs_{h1}", repr(float(lv.log10))))
        return out

    def table(self) -> str:
        lines = [f"{'model':<14}{'log P(data|model)':>22}{'P(data|model)':>26}"]
        for name, lv in self.marginals.items():
            lines.append(f"{name:<14}{float(lv.log):>22.10f}{format_log10(lv, 10):>26}")
        lines.append("")
        lines.append(f"{'H0 vs H1':<28}{'Bayes factor':>16}")
        for (h0, h1), lv in self.factors.items():
            lines.append(f"{h0 + ' vs ' + h1:<28}{format_log10(lv, self.sig):>16}")
        return "\n".join(lines)


def run_bayes_tests(
    table: CountTable,
    models: Sequence[str] = ("iid-uniform", "iid", "rev", "markov"),
    specs: dict[str, ModelSpec] | None = None,
    dps: int | None = None,
    sig: int = 6,
) -> BayesTestReport:
    """Marginal likelihood of each model and Bayes factors for every ordered pair."""
    specs = specs or {}
    marginals = {}
    for name in models:
        spec = specs.get(name) or ModelSpec.named(name)
        marginals[name] = log_marginal_competitor(spec, table, dps=dps)
    factors = {(h0, h1): marginals[h0] / marginals[h1] for h0, h1 in combinations(models, 2)}
    return BayesTestReport(marginals, factors, sig)


# Diagnostics ------------------------------------------------------------------------

@dataclass(frozen=True)
class PairDiagnostic:
    v: object
    w: object
    forward: int
    backward: int
    flow_forward: float
    flow_backward: float

    @property
    def ratio(self) -> Fraction | None:
        return None if self.backward == 0 else Fraction(self.forward, self.backward)

    @property
    def ratio_text(self) -> str:
        return "undefined" if self.backward == 0 else f"{self.forward}/{self.backward}"

    @property
    def difference(self) -> int:
        return self.forward - self.backward


@dataclass(frozen=True)
class DiagnosticsReport:
    pairs: tuple[PairDiagnostic, ...]
    nu_hat: dict

    def pair(self, v, w) -> PairDiagnostic:
        for p in self.pairs:
            if (p.v, p.w) == (v, w):
                return p
        raise KeyError((v, w))

    def as_pairs(self) -> list[tuple[str, str]]:
        out = []
        for p in self.pairs:
            out.append((f"diag.ratio.{p.v}{p.w}", p.ratio_text))
            out.append((f"diag.diff.{p.v}{p.w}", str(p.difference)))
            out.append((f"diag.flow.{p.v}{p.w}", f"{p.flow_forward!r} {p.flow_backward!r}"))
        for s, val in self.nu_hat.items():
            out.append((f"diag.nu.{s}", repr(val)))
        return out


def reversibility_diagnostics(table: CountTable) -> DiagnosticsReport:
    """Compare forward and backward transition counts for each symbol pair.

    Under reversibility ``N_vw`` and ``N_wv`` share the expectation
    ``nu(v) k(v, w)``.  Besides ratios and differences the report holds the
    moment estimate ``nu_hat(v)`` (share of ``X_1..X_n`` equal to ``v``) and
    the plug-in flows ``nu_hat(v) k_hat(v, w)`` in both directions.
    """
    n_total = table.transitions
    N = table.N
    nu = N.sum(axis=0) / n_total if n_total else np.zeros(len(table.symbols))
    rows = N.sum(axis=1)

    def flow(i, j):
        return float(nu[i] * N[i, j] / rows[i]) if rows[i] else math.nan

    pairs = []
    for i, j in combinations(range(len(table.symbols)), 2):
        pairs.append(PairDiagnostic(
            table.symbols[i], table.symbols[j], int(N[i, j]), int(N[j, i]), flow(i, j), flow(j, i)
        ))
    return DiagnosticsReport(tuple(pairs), {s: float(x) for s, x in zip(table.symbols, nu)})
