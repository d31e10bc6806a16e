"""Entailment-pair datasets, precision-recall curves and capped AUC.

Pairs are labelled from the outcome class of premise and hypothesis:

    premise \\ hypothesis   win   lose  tie   play
    win                    para  out0  out0  ent1
    lose                   out0  para  out0  ent1
    tie                    out0  out0  para  ent1
    play                   dir0  dir0  dir0  para

Paraphrase pairs are only generated between non-specific predicates.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from itertools import pairwise
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .graph import graph_from_scores, select_type_pair
from .relmodel import Corpus, TempographError
from .simmeasures import Denominator, MeasureSpec, score_all
from .counts import build_vectors
from .tfilter import temporal_filter
from .timealg import TimeSource, WindowMode

OUTCOMES = ("win", "lose", "tie")
PLAY = "play"
CLASSES = OUTCOMES + (PLAY,)


class DatasetError(TempographError):
    pass


class Category(Enum):
    ENTAILMENT1 = "entailment1"
    OUTCOME0 = "outcome0"
    DIRECTIONAL0 = "directional0"
    PARAPHRASE1 = "paraphrase1"

    @property
    def entails(self) -> bool:
        return self in (Category.ENTAILMENT1, Category.PARAPHRASE1)

    @classmethod
    def parse(cls, text: str) -> "Category":
        key = text.strip().lower().replace(" ", "").replace("_", "")
        for c in cls:
            if c.value == key:
                return c
        raise ValueError(f"unknown category {text!r}")


SUBSETS: dict[str, frozenset[Category]] = {
    "Base": frozenset({Category.ENTAILMENT1, Category.OUTCOME0}),
    "Directional": frozenset({Category.ENTAILMENT1, Category.DIRECTIONAL0}),
    "All": frozenset(Category),
}


def category_for(premise_class: str, hypothesis_class: str) -> Category:
    if premise_class == hypothesis_class:
        return Category.PARAPHRASE1
    if premise_class == PLAY:
        return Category.DIRECTIONAL0
    if hypothesis_class == PLAY:
        return Category.ENTAILMENT1
    return Category.OUTCOME0


@dataclass(frozen=True)
class EntailmentPair:
    premise: str
    hypothesis: str
    entails: bool
    category: Category

    def __post_init__(self):
        if self.premise == self.hypothesis:
            raise ValueError(f"self-pair {self.premise!r}")
        if self.entails != self.category.entails:
            raise ValueError(f"label {'entails' if self.entails else 'not-entails'} "
                             f"contradicts category {self.category.value}")


@dataclass
class ParaphraseClusters:
    """outcome class -> [(predicate, is_specific)]"""

    clusters: dict[str, list[tuple[str, bool]]] = field(default_factory=dict)

    def __post_init__(self):
        seen = {}
        for cls in CLASSES:
            if not self.clusters.get(cls):
                raise DatasetError(f"paraphrase cluster {cls!r} is empty")
        for cls, preds in self.clusters.items():
            if cls not in CLASSES:
                raise DatasetError(f"unknown class {cls!r}")
            for pred, _ in preds:
                if pred in seen:
                    raise DatasetError(f"predicate {pred!r} in both {seen[pred]!r} and {cls!r}")
                seen[pred] = cls

    @classmethod
    def from_lexicon(cls, lexicon: dict[str, Sequence[str]]) -> "ParaphraseClusters":
        return cls({k: [(p, False) for p in v] for k, v in lexicon.items()})


def load_clusters(path) -> ParaphraseClusters:
    """Read ``class \\t predicate \\t specificity`` rows (specific / non-specific)."""
    clusters: dict[str, list[tuple[str, bool]]] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[2] not in ("specific", "non-specific"):
                raise DatasetError(f"{path}:{lineno}: expected class, predicate, specific|non-specific")
            clusters.setdefault(parts[0], []).append((parts[1], parts[2] == "specific"))
    return ParaphraseClusters(clusters)


def generate_pairs(pc: ParaphraseClusters) -> list[EntailmentPair]:
    pairs = []
    for pcls in CLASSES:
        for premise, p_specific in pc.clusters[pcls]:
            for hcls in CLASSES:
                cat = category_for(pcls, hcls)
                for hyp, h_specific in pc.clusters[hcls]:
                    if hyp == premise:
                        continue
                    if cat is Category.PARAPHRASE1 and (p_specific or h_specific):
                        continue
                    pairs.append(EntailmentPair(premise, hyp, cat.entails, cat))
    return pairs


def _parse_label(text: str) -> bool:
    t = text.strip().lower()
    if t in ("entails", "1", "true", "yes"):
        return True
    if t in ("not-entails", "0", "false", "no"):
        return False
    raise ValueError(f"unknown label {text!r}")


def load_pairs(path) -> list[EntailmentPair]:
    """Read ``premise \\t hypothesis \\t label \\t category`` rows."""
    pairs = []
    try:
        fh = Path(path).open(encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DatasetError(f"{path}:{lineno}: expected 4 tab-separated fields, got {len(parts)}")
            try:
                pairs.append(EntailmentPair(parts[0], parts[1], _parse_label(parts[2]), Category.parse(parts[3])))
            except ValueError as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from None
    return pairs


def write_pairs(pairs: Iterable[EntailmentPair], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for pr in pairs:
            label = "entails" if pr.entails else "not-entails"
            fh.write(f"{pr.premise}\t{pr.hypothesis}\t{label}\t{pr.category.value}\n")


def subset(pairs: Iterable[EntailmentPair], name: str) -> list[EntailmentPair]:
    try:
        cats = SUBSETS[name]
    except KeyError:
        raise DatasetError(f"unknown subset {name!r}") from None
    return [p for p in pairs if p.category in cats]


# -- precision / recall --------------------------------------------------------

@dataclass
class PRCurve:
    points: list[tuple[float, float]]  # (recall, precision), one per distinct score
    thresholds: list[float]
    recall_cap: float
    auc_capped: float


def capped_auc(points: Sequence[tuple[float, float]], cap: float) -> float:
    """Trapezoidal area under (recall, precision) points up to recall ``cap``.

    The curve is anchored at recall 0 with the precision of the first point;
    the segment crossing ``cap`` is cut by linear interpolation.
    """
    if not points:
        return 0.0
    curve = [(0.0, points[0][1]), *points]
    area = 0.0
    for (r0, p0), (r1, p1) in pairwise(curve):
        if r0 >= cap:
            break
        if r1 > cap:
            p_cap = p0 + (p1 - p0) * (cap - r0) / (r1 - r0)
            area += (cap - r0) * (p0 + p_cap) / 2
            break
        area += (r1 - r0) * (p0 + p1) / 2
    return area


def pr_points(scores: Sequence[float], labels: Sequence[bool]):
    """Sweep thresholds from the highest score down; tied scores enter together."""
    positives = sum(labels)
    if positives == 0:
        raise DatasetError("no positive pairs to evaluate")
    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    points, thresholds = [], []
    tp = fp = 0
    k = 0
    while k < len(order):
        s = scores[order[k]]
        while k < len(order) and scores[order[k]] == s:
            if labels[order[k]]:
                tp += 1
            else:
                fp += 1
            k += 1
        points.append((tp / positives, tp / (tp + fp)))
        thresholds.append(s)
    return points, thresholds


def pr_curve(pairs: Sequence[EntailmentPair], score: Callable[[str, str], float],
             recall_cap: float = 0.75) -> PRCurve:
    """PR curve of ``score(premise, hypothesis)`` over ``pairs``; unscored pairs count as 0."""
    if not 0 < recall_cap <= 1:
        raise ValueError("recall_cap must lie in (0, 1]")
    scores = [score(p.premise, p.hypothesis) for p in pairs]
    points, thresholds = pr_points(scores, [p.entails for p in pairs])
    return PRCurve(points, thresholds, recall_cap, capped_auc(points, recall_cap))


# -- experiment grid -----------------------------------------------------------

RESULT_HEADER = ("source", "window", "measure", "subset", "auc", "recall_cap")


@dataclass(frozen=True, order=True)
class ResultRow:
    source: str
    window: int
    measure: str
    subset: str
    auc: float
    recall_cap: float


def evaluate_graph(graph, pairs: Sequence[EntailmentPair], measures: Sequence[str],
                   subsets: Sequence[str] = ("Base",), recall_cap: float = 0.75) -> list[ResultRow]:
    rows = []
    for m in measures:
        fn = graph.scorer(m)
        for s in subsets:
            sub = subset(pairs, s)
            auc = pr_curve(sub, fn, recall_cap).auc_capped
            rows.append(ResultRow(graph.meta.get("source", ""), int(graph.meta.get("window", 0)),
                                  m, s, auc, recall_cap))
    return sorted(rows)


def run_experiment(corpus: Corpus, pairs: Sequence[EntailmentPair],
                   sources: Sequence[TimeSource], windows: Sequence[int],
                   measures: Sequence[MeasureSpec], subsets: Sequence[str] = ("Base",),
                   recall_cap: float = 0.75, window_mode: WindowMode = WindowMode.BOTH,
                   denominator: Denominator = Denominator.UNFILTERED,
                   threads: int | None = 1) -> list[ResultRow]:
    """One capped AUC per (source, window, measure, subset) cell, sorted by cell key."""
    if not corpus.instances:
        raise TempographError("no evidence: corpus is empty")
    tp = select_type_pair(corpus)
    vectors, _ = build_vectors(corpus)
    rows = []
    for src in sources:
        for w in windows:
            edges = temporal_filter(corpus, src, w, window_mode, threads)
            matrix = score_all(vectors, edges, measures, denominator, threads)
            g = graph_from_scores(tp, vectors.keys(), matrix, {"source": src.short, "window": str(w)})
            rows.extend(evaluate_graph(g, pairs, matrix.measures, subsets, recall_cap))
    return sorted(rows)


def results_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_HEADER)
    for r in sorted(rows):
        w.writerow((r.source, r.window, r.measure, r.subset, f"{r.auc:.6f}", f"{r.recall_cap:g}"))
    return buf.getvalue()
