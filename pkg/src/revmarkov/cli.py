"""Command-line interface: ``revmarkov {counts,test,simulate,posterior,density}``.

Exit codes: 0 success, 2 input error, 3 numerical-domain error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path as FsPath

import numpy as np

from . import __version__
from .errors import InputError, NumericalDomainError
from .errw import RandomSource, simulate_edge_counts, stationary_samples
from .formatting import format_log10
from .graph import Graph
from .inference import (
    CountTable,
    ModelSpec,
    posterior_update,
    reversibility_diagnostics,
    reversible_counts,
    run_bayes_tests,
)
from .io import (
    file_digest,
    format_count_table,
    format_undirected_table,
    load_graph_spec,
    load_simplex_point,
    observed_alphabet,
    parse_sequence,
    parse_weights,
    read_count_table,
    sequence_to_counts,
)
from .prior import PriorParams, log_density

SEED_ENV = "REVMARKOV_SEED"
TABLE_SUFFIXES = {".csv", ".tsv"}


def _emit(pairs, fmt, out):
    if fmt == "kv":
        for k, v in pairs:
            out.write(f"{k}={v}\n")
    else:
        width = max(len(k) for k, _ in pairs)
        for k, v in pairs:
            out.write(f"{k:<{width}}  {v}\n")


def _header(inputs: dict[str, FsPath], seed=None) -> list[tuple[str, str]]:
    pairs = [("version", __version__)]
    if seed is not None:
        pairs.append(("seed", str(seed)))
    for name, path in inputs.items():
        pairs.append((f"input.{name}.sha256", file_digest(path)))
    return pairs


def _load_table(path: FsPath, alphabet: str | None) -> CountTable:
    if path.suffix.lower() in TABLE_SUFFIXES:
        return read_count_table(path)
    text = path.read_text()
    doc = parse_sequence(text, alphabet if alphabet else observed_alphabet(text))
    table, _, _ = sequence_to_counts(doc)
    return table


def _resolve_vertex(g: Graph, label: str | None) -> int:
    if label is None:
        return 0
    for i, lab in enumerate(g.labels):
        if str(lab) == label:
            return i
    raise InputError(f"unknown vertex label {label!r}")


def cmd_counts(args, out):
    path = FsPath(args.seqfile)
    text = path.read_text()
    doc = parse_sequence(text, args.alphabet or observed_alphabet(text))
    table, counts, g = sequence_to_counts(doc)
    pairs = _header({"sequence": path})
    pairs += [
        ("length", str(table.length)),
        ("start", str(table.symbols[table.start])),
        ("end", str(table.symbols[table.end])),
    ]
    for s, n in zip(table.symbols, table.symbol_counts):
        pairs.append((f"n.{s}", str(int(n))))
    for s, k in zip(g.labels, counts.k_vertices):
        pairs.append((f"k.{s}", str(k)))
    _emit(pairs, args.format, out)
    out.write("\n# directed counts N_ij\n")
    out.write(format_count_table(table))
    out.write("\n# undirected counts k_e (loops doubled)\n")
    out.write(format_undirected_table(counts))


def cmd_test(args, out):
    path = FsPath(args.input)
    table = _load_table(path, args.alphabet)
    if args.start or args.end:
        table = table.with_endpoints(args.start, args.end)
    table.require_endpoints()
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    specs = {}
    for name in models:
        if name in ("iid", "iid-dirichlet"):
            specs[name] = ModelSpec.named(name, alpha=args.alpha)
        elif name in ("markov", "full-markov"):
            specs[name] = ModelSpec.named(name, alpha=args.markov_alpha)
        elif name in ("rev", "reversible"):
            g = reversible_counts(table).graph
            a = parse_weights(g, args.prior)
            specs[name] = ModelSpec.named(name, params=PriorParams(g, table.start, a))
        else:
            specs[name] = ModelSpec.named(name)
    report = run_bayes_tests(table, models, specs, dps=args.dps, sig=args.digits)
    pairs = _header({"data": path})
    pairs += [
        ("start", str(table.symbols[table.start])),
        ("end", str(table.symbols[table.end])),
        ("length", str(table.length)),
    ]
    if args.format == "table":
        _emit(pairs, "table", out)
        out.write("\n" + report.table() + "\n")
    else:
        _emit(pairs + report.as_pairs(), "kv", out)
    if args.diagnostics:
        out.write("\n")
        _emit(reversibility_diagnostics(table).as_pairs(), args.format, out)


def cmd_simulate(args, out):
    gpath = FsPath(args.graph)
    g = load_graph_spec(gpath)
    params = PriorParams(g, _resolve_vertex(g, args.v0), parse_weights(g, args.weights))
    seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV, "0"))
    counts = simulate_edge_counts(params, args.steps, args.walkers, RandomSource(seed), args.workers)
    inputs = {"graph": gpath}
    if not args.weights.startswith("uniform:"):
        inputs["weights"] = FsPath(args.weights)
    pairs = _header(inputs, seed)
    pairs += [("steps", str(args.steps)), ("walkers", str(args.walkers)),
              ("v0", str(g.labels[params.v0]))]
    sink = open(args.out, "w") if args.out else out
    try:
        for k, v in pairs:
            sink.write(f"# {k}={v}\n")
        if args.stationary:
            values = stationary_samples(g, counts, args.steps)
            columns = [str(lab) for lab in g.labels]
        else:
            values = counts / args.steps
            columns = [g.edge_label(e) for e in range(g.num_edges)]
        sink.write(",".join(columns) + "\n")
        for row in values:
            sink.write(",".join(repr(float(x)) for x in row) + "\n")
    finally:
        if args.out:
            sink.close()
    if args.out:
        _emit(pairs + [("mean." + c, repr(float(m))) for c, m in zip(columns, values.mean(axis=0))],
              "kv", out)


def cmd_posterior(args, out):
    path = FsPath(args.input)
    table = _load_table(path, args.alphabet)
    if args.start or args.end:
        table = table.with_endpoints(args.start, args.end)
    counts = reversible_counts(table)
    g = counts.graph
    prior = PriorParams(g, table.start, parse_weights(g, args.prior))
    post = posterior_update(prior, counts)
    pairs = _header({"data": path})
    pairs.append(("v0", str(g.labels[post.v0])))
    for e in range(g.num_edges):
        pairs.append((f"a.{g.edge_label(e)}", repr(float(post.a[e]))))
    _emit(pairs, args.format, out)


def cmd_density(args, out):
    gpath, xpath = FsPath(args.graph), FsPath(args.at)
    g = load_graph_spec(gpath)
    params = PriorParams(g, _resolve_vertex(g, args.v0), parse_weights(g, args.weights))
    x = load_simplex_point(g, xpath)
    lv = log_density(params, x)
    pairs = _header({"graph": gpath, "point": xpath})
    pairs += [("v0", str(g.labels[params.v0])), ("log_density", repr(float(lv.log))),
              ("density", format_log10(lv, 12))]
    _emit(pairs, args.format, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revmarkov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("kv", "table"), default="kv")

    p = sub.add_parser("counts", help="directed and undirected transition tables of a sequence")
    p.add_argument("seqfile")
    p.add_argument("--alphabet", help="symbols in order (default: observed, sorted)")
    common(p)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("test", help="marginal likelihoods and Bayes factors")
    p.add_argument("input", help="sequence file, or count table (.csv/.tsv)")
    p.add_argument("--models", default="iid-uniform,iid,rev,markov")
    p.add_argument("--start")
    p.add_argument("--end")
    p.add_argument("--alphabet")
    p.add_argument("--prior", default="uniform:1", help="reversible prior edge weights")
    p.add_argument("--alpha", type=float, default=1.0, help="iid Dirichlet parameter")
    p.add_argument("--markov-alpha", type=float, default=1.0, help="full-Markov row Dirichlet parameter")
    p.add_argument("--digits", type=int, default=6, help="significant digits of Bayes factors")
    p.add_argument("--dps", type=int, help="evaluate with mpmath at this many digits")
    p.add_argument("--diagnostics", action="store_true", help="also print reversibility diagnostics")
    common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="ERRW posterior samples of k_e/n")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", default="uniform:1")
    p.add_argument("--v0", help="start vertex label (default: first vertex)")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--walkers", type=int, required=True)
    p.add_argument("--seed", type=int, help=f"overrides ${SEED_ENV}")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--stationary", action="store_true", help="dump nu(v) = x_v / 2 instead")
    p.add_argument("--out", help="write the dump here and print a summary")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("posterior", help="conjugate posterior parameters")
    p.add_argument("input")
    p.add_argument("--prior", default="uniform:1")
    p.add_argument("--start")
    p.add_argument("--end")
    p.add_argument("--alphabet")
    common(p)
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("density", help="log prior density at a simplex point")
    p.add_argument("--graph", required=True)
    p.add_argument("--at", required=True, help="edge-value file of the point")
    p.add_argument("--weights", default="uniform:1")
    p.add_argument("--v0")
    common(p)
    p.set_defaults(func=cmd_density)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except (InputError, OSError) as exc:
        print(f"revmarkov: input error: {exc}", file=sys.stderr)
        return 2
    except (NumericalDomainError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"revmarkov: numerical error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
