"""Reading sequences, count tables, graph specs and point files.

File formats
------------
sequence
    Free text.  Whitespace and digits (line-position numbers) are ignored;
    every other character must belong to the alphabet.
count table
    Delimited text (comma, tab or whitespace) with a header row of symbols
    and one row per symbol, first cell the row label.  Entries are directed
    counts ``N_ij``; the diagonal is the undoubled self-transition count.
    Optional ``# start: s`` / ``# end: s`` comment lines give the endpoints.
graph spec
    YAML (or JSON) mapping with ``vertices: [labels]`` and
    ``edges: [[u, v], ...]``.  ``complete: true`` (with optional
    ``loops: false``) replaces the edge list by all pairs.
edge values (simplex points, prior weights)
    YAML mapping from ``"u-v"`` edge labels to numbers, or the shorthand
    ``uniform:<value>`` for the prior weights.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path as FsPath

import numpy as np
import yaml

from .errors import InputError, ParseError
from .formatting import format_log10, parse_log10  # noqa: F401  (re-exported)
from .graph import Graph, build_graph, complete_graph
from .inference import CountTable
from .paths import Path, SimplexPoint, TransitionCounts, transition_counts

__all__ = [
    "SequenceDocument",
    "parse_sequence",
    "sequence_to_counts",
    "read_count_table",
    "format_count_table",
    "format_undirected_table",
    "load_graph_spec",
    "load_edge_values",
    "load_simplex_point",
    "observed_alphabet",
    "parse_weights",
    "file_digest",
    "data_path",
    "format_log10",
    "parse_log10",
]

_IGNORED = re.compile(r"[\s0-9]")


@dataclass(frozen=True)
class SequenceDocument:
    raw: str
    symbols: str
    alphabet: tuple


def parse_sequence(text: str, alphabet) -> SequenceDocument:
    """Strip whitespace and digits; reject anything outside ``alphabet``.

    >>> parse_sequence("1 tgggt\\n61 tcagg", "acgt").symbols
    'tgggttcagg'
    """
    alphabet = tuple(alphabet)
    if not alphabet:
        raise InputError("alphabet must be nonempty")
    allowed = set(alphabet)
    out = []
    line, col = 1, 0
    for pos, ch in enumerate(text):
        col += 1
        if ch == "\n":
            line, col = line + 1, 0
            continue
        if _IGNORED.match(ch):
            continue
        if ch not in allowed:
            raise ParseError(
                f"character {ch!r} at line {line}, column {col} (offset {pos}) "
                f"is not in the alphabet {''.join(alphabet)!r}",
                position=pos,
                char=ch,
            )
        out.append(ch)
    return SequenceDocument(text, "".join(out), alphabet)


def observed_alphabet(text: str) -> tuple:
    return tuple(sorted({ch for ch in text if not _IGNORED.match(ch)}))


def sequence_to_counts(doc: SequenceDocument) -> tuple[CountTable, TransitionCounts, Graph]:
    """Directed table, undirected counts and the complete graph with loops."""
    if not doc.symbols:
        raise InputError("sequence is empty")
    table = CountTable.from_sequence(doc.alphabet, doc.symbols)
    g = complete_graph(doc.alphabet, loops=True)
    idx = {s: i for i, s in enumerate(doc.alphabet)}
    counts = transition_counts(Path(g, tuple(idx[s] for s in doc.symbols)))
    return table, counts, g


def _split(line: str, delim: str | None) -> list[str]:
    if delim is None:
        return line.split()
    return [c.strip() for c in next(csv.reader([line], delimiter=delim))]


def read_count_table(source) -> CountTable:
    """Parse a labelled count table from a path or a text string."""
    text = FsPath(source).read_text() if isinstance(source, FsPath) else source
    start = end = None
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*(start|end)\s*[:=]\s*(\S+)", line)
            if m:
                if m.group(1) == "start":
                    start = m.group(2)
                else:
                    end = m.group(2)
            continue
        rows.append(raw)
    if not rows:
        raise InputError("count table is empty")
    delim = "," if "," in rows[0] else "\t" if "\t" in rows[0] else None
    header = _split(rows[0], delim)
    if len(header) == len(rows):
        header = header[1:]  # corner cell
    symbols = tuple(header)
    if len(rows) - 1 != len(symbols) or not all(symbols):
        raise InputError(f"header has {len(symbols)} symbols but there are {len(rows) - 1} rows")
    n = np.zeros((len(symbols), len(symbols)), dtype=np.int64)
    for i, raw in enumerate(rows[1:]):
        cells = _split(raw, delim)
        if cells[0] != symbols[i]:
            raise InputError(f"row {i + 1} is labelled {cells[0]!r}, expected {symbols[i]!r}")
        values = cells[1:]
        if len(values) != len(symbols):
            raise InputError(f"row {cells[0]!r} has {len(values)} entries, expected {len(symbols)}")
        try:
            n[i] = [int(v) for v in values]
        except ValueError:
            raise InputError(f"row {cells[0]!r} contains a non-integer entry") from None
    table = CountTable(symbols, n)
    if start is not None or end is not None:
        table = table.with_endpoints(start, end)
    return table


def format_count_table(table: CountTable, delim: str = ",") -> str:
    buf = _io.StringIO()
    if table.start is not None:
        buf.write(f"# start: {table.symbols[table.start]}\n")
        buf.write(f"# end: {table.symbols[table.end]}\n")
    w = csv.writer(buf, delimiter=delim, lineterminator="\n")
    w.writerow([""] + list(table.symbols))
    for s, row in zip(table.symbols, table.N):
        w.writerow([s] + [int(x) for x in row])
    return buf.getvalue()


def format_undirected_table(counts: TransitionCounts, delim: str = ",") -> str:
    """Symmetric table of ``k_e`` (loop counts already doubled)."""
    g = counts.graph
    buf = _io.StringIO()
    w = csv.writer(buf, delimiter=delim, lineterminator="\n")
    w.writerow([""] + list(g.labels))
    for i, s in enumerate(g.labels):
        row = []
        for j in range(g.num_vertices):
            e = g.edge_id(i, j)
            row.append(0 if e is None else counts.k_edges[e])
        w.writerow([s] + row)
    return buf.getvalue()


def load_graph_spec(source) -> Graph:
    """Graph from a YAML/JSON spec (path or text)."""
    text = FsPath(source).read_text() if isinstance(source, FsPath) else source
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InputError(f"graph spec is not valid YAML: {exc}") from None
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise InputError("graph spec needs 'vertices' and 'edges'")
    if doc.get("complete"):
        return complete_graph(doc["vertices"], loops=bool(doc.get("loops", True)))
    if "edges" not in doc:
        raise InputError("graph spec needs 'vertices' and 'edges'")
    return build_graph(doc["vertices"], [tuple(e) for e in doc["edges"]])


def _edge_lookup(g: Graph) -> dict[str, int]:
    out = {}
    for e, (u, v) in enumerate(g.edges):
        out[f"{g.labels[u]}-{g.labels[v]}"] = e
        out[f"{g.labels[v]}-{g.labels[u]}"] = e
    return out


def load_edge_values(g: Graph, source) -> np.ndarray:
    """Per-edge numbers from a ``"u-v": value`` mapping; every edge required."""
    text = FsPath(source).read_text() if isinstance(source, FsPath) else source
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise InputError("edge value file must be a mapping from 'u-v' to numbers")
    lookup = _edge_lookup(g)
    values = np.full(g.num_edges, np.nan)
    for key, val in doc.items():
        e = lookup.get(str(key))
        if e is None:
            raise InputError(f"unknown edge {key!r}")
        values[e] = float(val)
    missing = [g.edge_label(e) for e in range(g.num_edges) if np.isnan(values[e])]
    if missing:
        raise InputError(f"no value for edges {missing}")
    return values


def load_simplex_point(g: Graph, source) -> SimplexPoint:
    return SimplexPoint(g, load_edge_values(g, source))


def parse_weights(g: Graph, spec: str) -> np.ndarray:
    """``uniform:<c>`` or a path to an edge-value file."""
    if spec.startswith("uniform:"):
        try:
            value = float(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad weight spec {spec!r}") from None
        return np.full(g.num_edges, value)
    return load_edge_values(g, FsPath(spec))


def file_digest(path) -> str:
    return hashlib.sha256(FsPath(path).read_bytes()).hexdigest()[:16]


def data_path(name: str) -> FsPath:
    """Path to a bundled fixture (``hla_b_bigrams.csv``, ``hla_b_sequence_transcribed.txt``)."""
    return FsPath(str(resources.files("revmarkov") / "data" / name))
