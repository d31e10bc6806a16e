"""Temporally filtered, directional co-occurrence counts.

For every entity pair and every pair of predicates seen with it, count the
events of each predicate whose time interval overlaps some event of the other.
Counts accumulate per ordered predicate pair and per shared entity-pair feature.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .relmodel import Corpus, EntityPairId, PredicateId
from .timealg import IntervalProbe, TimeSource, WindowMode, resolve_intervals, tolerance

# Below this many entity pairs a process pool costs more than it saves.
PARALLEL_MIN_PAIRS = 2000


@dataclass
class EdgeEvidence:
    """Filtered counts for the ordered edge ``p -> q``.

    ``per_feature[ep]`` is the number of p-events at ``ep`` overlapping any
    q-event at ``ep``. Every shared feature is present, zeros included, so the
    keys are exactly supp(p) & supp(q).
    """

    p: PredicateId
    q: PredicateId
    per_feature: dict[EntityPairId, int] = field(default_factory=dict)

    @property
    def total_filtered(self) -> int:
        return sum(self.per_feature.values())


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("TEMPOGRAPH_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, threads)


def _filter_pair_group(group, tol):
    """One entity pair's worth of the filtering loop.

    ``group`` is ``(ep, [(predicate, [intervals of each instance]), ...])`` with
    predicates sorted. Yields ``(p, q, filtered p->q, filtered q->p)``.
    """
    ep, preds = group
    probes = [IntervalProbe([iv for inst in insts for iv in inst], tol) for _, insts in preds]
    for i in range(len(preds)):
        p, p_insts = preds[i]
        for j in range(i + 1, len(preds)):
            q, q_insts = preds[j]
            n_pq = sum(1 for inst in p_insts if probes[j].hits_any(inst))
            n_qp = sum(1 for inst in q_insts if probes[i].hits_any(inst))
            yield p, q, n_pq, n_qp


def _filter_chunk(chunk, tol):
    return [(ep, list(_filter_pair_group((ep, preds), tol))) for ep, preds in chunk]


def _groups(c: Corpus, src: TimeSource):
    by_ep = c.by_entity_pair()
    for ep in sorted(by_ep):
        row = by_ep[ep]
        if len(row) < 2:
            continue
        preds = [(p, [resolve_intervals(inst, src) for inst in row[p]]) for p in sorted(row)]
        yield ep, preds


def temporal_filter(c: Corpus, src: TimeSource, window: int = 0,
                    mode: WindowMode = WindowMode.BOTH, threads: int | None = 1):
    """Edge evidence for every ordered predicate pair sharing a feature.

    Returns ``{(p, q): EdgeEvidence}``; both directions of a co-occurring pair
    are present. The result does not depend on ``threads``.
    """
    tol = tolerance(window, mode)
    groups = list(_groups(c, src))
    threads = resolve_threads(threads)
    if threads > 1 and len(groups) >= PARALLEL_MIN_PAIRS:
        chunks = [groups[k::threads * 4] for k in range(threads * 4)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [r for part in pool.map(_filter_chunk, chunks, [tol] * len(chunks)) for r in part]
    else:
        results = _filter_chunk(groups, tol)

    edges: dict[tuple[PredicateId, PredicateId], EdgeEvidence] = {}
    for ep, rows in sorted(results, key=lambda r: r[0]):
        for p, q, n_pq, n_qp in rows:
            for a, b, n in ((p, q, n_pq), (q, p, n_qp)):
                e = edges.get((a, b))
                if e is None:
                    e = edges[(a, b)] = EdgeEvidence(a, b)
                e.per_feature[ep] = e.per_feature.get(ep, 0) + n
    return edges


def dump_evidence(edges, fh) -> None:
    """``p, q, ep, filtered_count`` tab-separated, sorted."""
    rows = sorted((str(e.p), str(e.q), str(ep), n)
                  for e in edges.values() for ep, n in e.per_feature.items())
    for p, q, ep, n in rows:
        fh.write(f"{p}\t{q}\t{ep}\t{n}\n")
