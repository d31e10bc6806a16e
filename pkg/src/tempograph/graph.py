"""Typed entailment graph assembly and its plain-text edge-list format.

File layout (UTF-8, tab separated, optionally gzip-compressed)::

    #tempograph-graph   1
    #type_pair          organization#organization
    #source             both
    #window             4
    #window_mode        both
    #denominator        unfiltered
    #measures           Cosine  Lin-Count  ...
    N   <predicate>
    E   <premise>   <hypothesis>   <score per measure, 17 significant digits>

Nodes and edges are written sorted, so equal graphs give identical bytes.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .counts import apply_min_count, build_vectors
from .relmodel import Corpus, TempographError
from .simmeasures import Denominator, MeasureSpec, ScoreMatrix, parse_measures, score_all
from .tfilter import temporal_filter
from .timealg import TimeSource, WindowMode

MAGIC = "#tempograph-graph"
VERSION = "1"


class GraphFormatError(TempographError):
    pass


@dataclass
class EntailmentGraph:
    type_pair: tuple[str, str]
    nodes: frozenset[str]
    measures: tuple[str, ...]
    edges: dict[tuple[str, str], tuple[float, ...]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for p, q in self.edges:
            if p not in self.nodes or q not in self.nodes:
                raise ValueError(f"edge {p} -> {q} has an endpoint outside the node set")

    def score(self, p: str, q: str, measure: str) -> float:
        row = self.edges.get((p, q))
        return 0.0 if row is None else row[self.measures.index(measure)]

    def scorer(self, measure: str):
        k = self.measures.index(measure)
        edges = self.edges
        return lambda p, q: edges[(p, q)][k] if (p, q) in edges else 0.0


def graph_from_scores(type_pair, nodes, matrix: ScoreMatrix, meta=None) -> EntailmentGraph:
    edges = {(p.name, q.name): row for (p, q), row in matrix.scores.items()}
    return EntailmentGraph(tuple(type_pair), frozenset(n.name for n in nodes), matrix.measures,
                           edges, dict(meta or {}))


def select_type_pair(corpus: Corpus, type_pair: Optional[tuple[str, str]] = None) -> tuple[str, str]:
    available = corpus.type_pairs
    if type_pair is not None:
        return tuple(type_pair)
    if len(available) != 1:
        raise TempographError(
            f"corpus holds {len(available)} type pairs ({', '.join('#'.join(t) for t in available)}); pick one")
    return available[0]


def build_graph(corpus: Corpus, src: TimeSource = TimeSource.TIMEX_AND_DOC_DATE, window: int = 4,
                measures: str | Sequence[MeasureSpec] = "all",
                window_mode: WindowMode = WindowMode.BOTH,
                denominator: Denominator = Denominator.UNFILTERED,
                min_count: int = 0, type_pair=None, threads: int | None = 1) -> EntailmentGraph:
    if not corpus.instances:
        raise TempographError("no evidence: corpus is empty")
    tp = select_type_pair(corpus, type_pair)
    typed = corpus.restrict(lambda inst: inst.predicate.type_pair == tp)
    typed = apply_min_count(typed, min_count)
    if not typed.instances:
        raise TempographError(f"no evidence for type pair {'#'.join(tp)}")
    specs = parse_measures(measures) if isinstance(measures, str) else list(measures)
    vectors, _ = build_vectors(typed)
    edges = temporal_filter(typed, src, window, window_mode, threads)
    matrix = score_all(vectors, edges, specs, denominator, threads)
    meta = {
        "source": src.short,
        "window": str(window),
        "window_mode": window_mode.value,
        "denominator": denominator.value,
    }
    return graph_from_scores(tp, vectors.keys(), matrix, meta)


def _check_field(s: str):
    if not s or "\t" in s or "\n" in s:
        raise GraphFormatError(f"cannot serialise name {s!r}")
    return s


def dumps_graph(g: EntailmentGraph) -> str:
    buf = io.StringIO()
    buf.write(f"{MAGIC}\t{VERSION}\n")
    buf.write(f"#type_pair\t{'#'.join(g.type_pair)}\n")
    for key in sorted(g.meta):
        buf.write(f"#{_check_field(key)}\t{g.meta[key]}\n")
    buf.write("#measures" + "".join(f"\t{m}" for m in g.measures) + "\n")
    for n in sorted(g.nodes):
        buf.write(f"N\t{_check_field(n)}\n")
    for (p, q) in sorted(g.edges):
        row = g.edges[(p, q)]
        buf.write(f"E\t{p}\t{q}" + "".join(f"\t{v:.17g}" for v in row) + "\n")
    return buf.getvalue()


def write_graph(g: EntailmentGraph, path) -> None:
    path = Path(path)
    data = dumps_graph(g).encode("utf-8")
    if path.suffix == ".gz":
        # mtime pinned so compressed output is byte-stable too
        with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0, filename="") as fh:
            fh.write(data)
    else:
        path.write_bytes(data)


def loads_graph(text: str, source: str = "<graph>") -> EntailmentGraph:
    lines = text.split("\n")
    if not lines or not lines[0].startswith(MAGIC):
        raise GraphFormatError(f"{source}:1: missing {MAGIC} header")
    meta: dict[str, str] = {}
    measures: Optional[tuple[str, ...]] = None
    type_pair = None
    nodes = set()
    edges = {}
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        parts = line.split("\t")
        tag = parts[0]
        if tag.startswith("#"):
            key = tag[1:]
            if key == "measures":
                measures = tuple(parts[1:])
            elif key == "type_pair":
                tp = parts[1].split("#") if len(parts) == 2 else []
                if len(tp) != 2:
                    raise GraphFormatError(f"{source}:{lineno}: bad type_pair line")
                type_pair = (tp[0], tp[1])
            else:
                meta[key] = "\t".join(parts[1:])
        elif tag == "N":
            if len(parts) != 2:
                raise GraphFormatError(f"{source}:{lineno}: node line needs exactly one name")
            nodes.add(parts[1])
        elif tag == "E":
            if measures is None:
                raise GraphFormatError(f"{source}:{lineno}: edge before #measures header")
            if len(parts) != 3 + len(measures):
                raise GraphFormatError(
                    f"{source}:{lineno}: expected {len(measures)} scores, got {len(parts) - 3}")
            try:
                row = tuple(float(v) for v in parts[3:])
            except ValueError as exc:
                raise GraphFormatError(f"{source}:{lineno}: {exc}") from None
            if (parts[1], parts[2]) in edges:
                raise GraphFormatError(f"{source}:{lineno}: duplicate edge {parts[1]} -> {parts[2]}")
            edges[(parts[1], parts[2])] = row
        else:
            raise GraphFormatError(f"{source}:{lineno}: unknown record tag {tag!r}")
    if type_pair is None or measures is None:
        raise GraphFormatError(f"{source}: header lacks type_pair or measures")
    try:
        return EntailmentGraph(type_pair, frozenset(nodes), measures, edges, meta)
    except ValueError as exc:
        raise GraphFormatError(f"{source}: {exc}") from None


def read_graph(path) -> EntailmentGraph:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise TempographError(f"cannot read graph {path}: {exc}") from exc
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise GraphFormatError(f"{path}: not UTF-8 ({exc})") from None
    return loads_graph(text, str(path))
