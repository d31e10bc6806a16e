"""Temporally filtered entailment graphs over time-stamped binary relations."""

from .relmodel import (Corpus, EntityPairId, PredicateId, RelationInstance, TempographError,
                       TimeInterval, corpus_stats, load_corpus)
from .timealg import TimeSource, WindowMode, extend, overlaps, resolve_intervals
from .counts import build_vectors, cosine
from .tfilter import EdgeEvidence, temporal_filter
from .simmeasures import DEFAULT_MEASURES, REGISTRY, MeasureSpec, score_all
from .graph import EntailmentGraph, build_graph, read_graph, write_graph
from .evalkit import EntailmentPair, generate_pairs, load_pairs, pr_curve, run_experiment

__version__ = "0.1.0"
