"""Sparse predicate-by-entity-pair count vectors with PMI feature weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .relmodel import Corpus, EntityPairId, PredicateId, TempographError


class Entry(NamedTuple):
    count: int
    pmi: float


@dataclass
class FeatureVector:
    predicate: PredicateId
    entries: dict[EntityPairId, Entry] = field(default_factory=dict)

    def __post_init__(self):
        # Totals are summed in sorted feature order so they do not depend on
        # corpus line order.
        keys = sorted(self.entries)
        self.total_count = sum(self.entries[k].count for k in keys)
        self.total_pmi = math.fsum(self.entries[k].pmi for k in keys)
        self.norm = math.sqrt(math.fsum(self.entries[k].pmi ** 2 for k in keys))

    @property
    def support(self):
        return self.entries.keys()

    def scaled(self, alpha: float) -> "FeatureVector":
        return FeatureVector(self.predicate,
                             {ep: Entry(e.count, e.pmi * alpha) for ep, e in self.entries.items()})


@dataclass(frozen=True)
class CountTables:
    predicate_totals: dict[PredicateId, int]
    pair_totals: dict[EntityPairId, int]
    total: int


def apply_min_count(c: Corpus, min_count: int) -> Corpus:
    """Drop every instance of predicates seen fewer than ``min_count`` times."""
    if min_count <= 0:
        return c
    keep = {p for p in c.index if c.count(p) >= min_count}
    return c.restrict(lambda inst: inst.predicate in keep)


def pmi(joint: int, p_total: int, ep_total: int, total: int, clamp: bool = True) -> float:
    value = math.log((joint * total) / (p_total * ep_total))
    return max(0.0, value) if clamp else value


def build_vectors(c: Corpus, clamp: bool = True):
    """Feature vectors for every predicate in ``c`` plus the marginal count tables.

    ``clamp=False`` keeps negative PMI values; only useful for debugging since the
    inclusion measures assume non-negative weights.
    """
    if not c.instances:
        raise TempographError("no evidence: corpus is empty")
    p_tot: dict[PredicateId, int] = {}
    ep_tot: dict[EntityPairId, int] = {}
    for p, row in c.index.items():
        for ep, positions in row.items():
            n = len(positions)
            p_tot[p] = p_tot.get(p, 0) + n
            ep_tot[ep] = ep_tot.get(ep, 0) + n
    total = len(c.instances)
    vectors = {}
    for p, row in c.index.items():
        entries = {ep: Entry(len(pos), pmi(len(pos), p_tot[p], ep_tot[ep], total, clamp))
                   for ep, pos in row.items()}
        vectors[p] = FeatureVector(p, entries)
    return vectors, CountTables(p_tot, ep_tot, total)


def cosine(p: FeatureVector, q: FeatureVector) -> float:
    if p.norm == 0 or q.norm == 0:
        return 0.0
    small, big = (p, q) if len(p.entries) <= len(q.entries) else (q, p)
    shared = sorted(ep for ep in small.entries if ep in big.entries)
    dot = math.fsum(p.entries[ep].pmi * q.entries[ep].pmi for ep in shared)
    return min(1.0, dot / (p.norm * q.norm))


def dump_vectors(vectors: dict[PredicateId, FeatureVector], fh) -> None:
    """Tab-separated ``predicate, entity pair, raw count, pmi`` lines, sorted."""
    rows = []
    for p, vec in vectors.items():
        for ep, e in vec.entries.items():
            rows.append((str(p), str(ep), e.count, e.pmi))
    for pred, ep, n, w in sorted(rows):
        fh.write(f"{pred}\t{ep}\t{n}\t{w:.17g}\n")
