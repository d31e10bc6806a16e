"""Similarity measure registry: distributional baselines and their temporal variants.

For an edge p -> q every measure sees the shared features of p and q. A
temporal measure replaces the numerator weights of each side with weights
derived from the filtered counts of that direction, while denominators keep the
unfiltered totals of the same weighting scheme (unless the ``filtered``
denominator mode is selected).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .counts import FeatureVector, cosine
from .relmodel import PredicateId, TempographError
from .tfilter import EdgeEvidence, resolve_threads

PARALLEL_MIN_EDGES = 20000


class Family(Enum):
    LIN = "Lin"
    WEEDS_PRECISION = "WeedsPr"
    WEEDS_RECALL = "WeedsRc"
    WEEDS_SIMILARITY = "WeedsSim"
    BINC = "BInc"
    COSINE = "Cosine"
    WEEDS_PROB = "WeedsProb"  # experimental probabilistic precision


class Weighting(Enum):
    COUNT = "Count"
    PMI = "PMI"


class TemporalMode(Enum):
    NONE = "None"
    FILTERED_COUNT = "FilteredCount"
    RATIO_PMI = "RatioPMI"
    BINARY_PMI = "BinaryPMI"
    HYBRID_RATIO = "HybridRatio"
    HYBRID_BINARY = "HybridBinary"


class Denominator(Enum):
    UNFILTERED = "unfiltered"
    FILTERED = "filtered"


_SUFFIX = {
    TemporalMode.FILTERED_COUNT: "Count",
    TemporalMode.RATIO_PMI: "Ratio",
    TemporalMode.BINARY_PMI: "Binary",
    TemporalMode.HYBRID_RATIO: "HybridRatio",
    TemporalMode.HYBRID_BINARY: "HybridBinary",
}


@dataclass(frozen=True)
class MeasureSpec:
    family: Family
    weighting: Weighting
    temporal_mode: TemporalMode = TemporalMode.NONE

    def __post_init__(self):
        mode = self.temporal_mode
        if self.family is Family.COSINE and (mode is not TemporalMode.NONE or self.weighting is not Weighting.PMI):
            raise ValueError("cosine is a non-temporal PMI baseline only")
        if mode in (TemporalMode.HYBRID_RATIO, TemporalMode.HYBRID_BINARY) and self.family is not Family.BINC:
            raise ValueError("hybrid modes are only defined for BInc")
        if mode is TemporalMode.FILTERED_COUNT and self.weighting is not Weighting.COUNT:
            raise ValueError("filtered-count mode needs count weighting")
        if mode in (TemporalMode.RATIO_PMI, TemporalMode.BINARY_PMI) and self.weighting is not Weighting.PMI:
            raise ValueError("scaled-PMI modes need PMI weighting")
        if self.family is Family.WEEDS_PROB and self.weighting is not Weighting.COUNT:
            raise ValueError("probabilistic precision is count based")

    @property
    def id(self) -> str:
        if self.family is Family.COSINE:
            return "Cosine"
        if self.temporal_mode is TemporalMode.NONE:
            return f"{self.family.value}-{self.weighting.value}"
        return f"T-{self.family.value}-{_SUFFIX[self.temporal_mode]}"

    @property
    def temporal(self) -> bool:
        return self.temporal_mode is not TemporalMode.NONE

    def counterpart(self) -> Optional["MeasureSpec"]:
        """The non-temporal registry measure this one adapts (None for hybrids)."""
        if not self.temporal or self.temporal_mode in (TemporalMode.HYBRID_RATIO, TemporalMode.HYBRID_BINARY):
            return None
        return MeasureSpec(self.family, self.weighting)


def _registry() -> list[MeasureSpec]:
    core = [Family.LIN, Family.WEEDS_PRECISION, Family.WEEDS_RECALL, Family.WEEDS_SIMILARITY, Family.BINC]
    specs = [MeasureSpec(Family.COSINE, Weighting.PMI)]
    specs += [MeasureSpec(f, Weighting.COUNT) for f in core]
    specs += [MeasureSpec(f, Weighting.PMI) for f in core]
    specs += [MeasureSpec(f, Weighting.COUNT, TemporalMode.FILTERED_COUNT) for f in core]
    specs += [MeasureSpec(f, Weighting.PMI, TemporalMode.RATIO_PMI) for f in core]
    specs += [MeasureSpec(f, Weighting.PMI, TemporalMode.BINARY_PMI) for f in core]
    specs += [MeasureSpec(Family.BINC, Weighting.PMI, TemporalMode.HYBRID_RATIO),
              MeasureSpec(Family.BINC, Weighting.PMI, TemporalMode.HYBRID_BINARY)]
    specs += [MeasureSpec(Family.WEEDS_PROB, Weighting.COUNT),
              MeasureSpec(Family.WEEDS_PROB, Weighting.COUNT, TemporalMode.FILTERED_COUNT)]
    return specs


REGISTRY: dict[str, MeasureSpec] = {m.id: m for m in _registry()}
assert len(REGISTRY) == 30

# The default set: everything except the temporal probabilistic precision.
# Every temporal measure in it has its non-temporal counterpart alongside.
DEFAULT_MEASURES: tuple[str, ...] = tuple(k for k in REGISTRY if k != "T-WeedsProb-Count")


def get_measure(measure_id: str) -> MeasureSpec:
    try:
        return REGISTRY[measure_id]
    except KeyError:
        raise TempographError(f"unknown measure {measure_id!r}") from None


def parse_measures(text: str | Sequence[str]) -> list[MeasureSpec]:
    """``"all"`` for the default 29, ``"registry"`` for all 30, or a comma list of ids."""
    if isinstance(text, str):
        if text == "all":
            return [REGISTRY[k] for k in DEFAULT_MEASURES]
        if text == "registry":
            return list(REGISTRY.values())
        text = [t.strip() for t in text.split(",") if t.strip()]
    if not text:
        raise TempographError("no measures requested")
    return [get_measure(t) for t in text]


# -- scalar measure definitions ------------------------------------------------

def weeds_precision(num_p: Sequence[float], den_p: float) -> float:
    """Weighted share of p's features that q also has."""
    if den_p <= 0:
        return 0.0
    return min(1.0, math.fsum(num_p) / den_p)


def lin_similarity(num_p: Sequence[float], num_q: Sequence[float], den_p: float, den_q: float) -> float:
    den = den_p + den_q
    if den <= 0:
        return 0.0
    return min(1.0, math.fsum([*num_p, *num_q]) / den)


def weeds_similarity(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return min(1.0, 2 * (precision * recall) / (precision + recall))


def binc(lin: float, precision: float) -> float:
    return math.sqrt(lin * precision)


def prob_precision(num_p: Sequence[float], num_q: Sequence[float], den_p: float, den_q: float) -> float:
    """Overlap of the two feature distributions, seen from p.

    Weights are normalised to probabilities by their side's total and each
    shared feature contributes the smaller of its two probabilities.
    """
    if den_p <= 0 or den_q <= 0:
        return 0.0
    return min(1.0, math.fsum(min(a / den_p, b / den_q) for a, b in zip(num_p, num_q)))


# -- per-edge evaluation -------------------------------------------------------

class EdgeContext:
    """Per-edge weight arrays, computed lazily and aligned on the shared features."""

    def __init__(self, vp: FeatureVector, vq: FeatureVector,
                 e_pq: Optional[EdgeEvidence], e_qp: Optional[EdgeEvidence],
                 denominator: Denominator = Denominator.UNFILTERED):
        self.vp, self.vq = vp, vq
        if e_pq is not None:
            shared = e_pq.per_feature.keys()
        else:
            shared = [ep for ep in vp.entries if ep in vq.entries]
        self.shared = sorted(shared)
        self.f_pq = e_pq.per_feature if e_pq is not None else {}
        self.f_qp = e_qp.per_feature if e_qp is not None else {}
        self.denominator = denominator
        self._weights = {}

    def _side(self, vec: FeatureVector, filt: dict, scheme: str):
        entries = [vec.entries[ep] for ep in self.shared]
        if scheme == "count":
            return [e.count for e in entries], vec.total_count
        if scheme == "pmi":
            return [e.pmi for e in entries], vec.total_pmi
        fs = [filt.get(ep, 0) for ep in self.shared]
        if scheme == "fcount":
            num, den = fs, vec.total_count
        elif scheme == "ratio":
            num, den = [e.pmi * (f / e.count) for e, f in zip(entries, fs)], vec.total_pmi
        elif scheme == "binary":
            num, den = [e.pmi if f > 0 else 0.0 for e, f in zip(entries, fs)], vec.total_pmi
        else:
            raise ValueError(scheme)
        if self.denominator is Denominator.FILTERED:
            den = math.fsum(num)
        return num, den

    def weights(self, scheme: str):
        """((num_p, den_p), (num_q, den_q)) for the direction p -> q."""
        w = self._weights.get(scheme)
        if w is None:
            w = self._weights[scheme] = (self._side(self.vp, self.f_pq, scheme),
                                         self._side(self.vq, self.f_qp, scheme))
        return w

    def family_score(self, family: Family, scheme: str) -> float:
        (np_, dp), (nq, dq) = self.weights(scheme)
        if family is Family.WEEDS_PRECISION:
            return weeds_precision(np_, dp)
        if family is Family.WEEDS_RECALL:
            return weeds_precision(nq, dq)
        if family is Family.LIN:
            return lin_similarity(np_, nq, dp, dq)
        if family is Family.WEEDS_SIMILARITY:
            return weeds_similarity(weeds_precision(np_, dp), weeds_precision(nq, dq))
        if family is Family.BINC:
            return binc(lin_similarity(np_, nq, dp, dq), weeds_precision(np_, dp))
        if family is Family.WEEDS_PROB:
            return prob_precision(np_, nq, dp, dq)
        raise ValueError(family)

    def score(self, m: MeasureSpec) -> float:
        mode = m.temporal_mode
        if m.family is Family.COSINE:
            return cosine(self.vp, self.vq)
        if mode is TemporalMode.HYBRID_RATIO or mode is TemporalMode.HYBRID_BINARY:
            lin = self.family_score(Family.LIN, "ratio" if mode is TemporalMode.HYBRID_RATIO else "binary")
            return binc(lin, self.family_score(Family.WEEDS_PRECISION, "fcount"))
        return self.family_score(m.family, _SCHEME[(m.weighting, mode)])


_SCHEME = {
    (Weighting.COUNT, TemporalMode.NONE): "count",
    (Weighting.PMI, TemporalMode.NONE): "pmi",
    (Weighting.COUNT, TemporalMode.FILTERED_COUNT): "fcount",
    (Weighting.PMI, TemporalMode.RATIO_PMI): "ratio",
    (Weighting.PMI, TemporalMode.BINARY_PMI): "binary",
}


def score_edge(m: MeasureSpec, vp: FeatureVector, vq: FeatureVector,
               e_pq: Optional[EdgeEvidence] = None, e_qp: Optional[EdgeEvidence] = None,
               denominator: Denominator = Denominator.UNFILTERED) -> float:
    return EdgeContext(vp, vq, e_pq, e_qp, denominator).score(m)


@dataclass
class ScoreMatrix:
    """Sparse score matrix: ordered predicate pair -> one score per measure."""

    measures: tuple[str, ...]
    scores: dict[tuple[PredicateId, PredicateId], tuple[float, ...]]

    def get(self, p: PredicateId, q: PredicateId, measure: str) -> float:
        row = self.scores.get((p, q))
        return 0.0 if row is None else row[self.measures.index(measure)]

    def column(self, measure: str) -> dict[tuple[PredicateId, PredicateId], float]:
        k = self.measures.index(measure)
        return {pq: row[k] for pq, row in self.scores.items()}


def _score_chunk(items, measures, denominator):
    out = []
    for (p, q), vp, vq, e_pq, e_qp in items:
        ctx = EdgeContext(vp, vq, e_pq, e_qp, denominator)
        out.append(((p, q), tuple(ctx.score(m) for m in measures)))
    return out


def score_all(vectors: dict[PredicateId, FeatureVector], edges: dict, measures: Sequence[MeasureSpec],
              denominator: Denominator = Denominator.UNFILTERED, threads: int | None = 1) -> ScoreMatrix:
    """Score every ordered pair with shared support under each requested measure."""
    measures = [get_measure(m) if isinstance(m, str) else m for m in measures]
    keys = sorted(pq for pq, e in edges.items() if e.per_feature)
    items = [((p, q), vectors[p], vectors[q], edges[(p, q)], edges.get((q, p))) for p, q in keys]
    threads = resolve_threads(threads)
    if threads > 1 and len(items) >= PARALLEL_MIN_EDGES:
        n = threads * 4
        chunks = [items[k::n] for k in range(n)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_score_chunk, chunks, [measures] * n, [denominator] * n)
            rows = [r for part in parts for r in part]
    else:
        rows = _score_chunk(items, measures, denominator)
    return ScoreMatrix(tuple(m.id for m in measures), dict(sorted(rows)))
