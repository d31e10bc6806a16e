import gzip
import random

import pytest

from tempograph.graph import (EntailmentGraph, GraphFormatError, build_graph, dumps_graph, loads_graph,
                              read_graph, write_graph)
from tempograph.relmodel import Corpus, EntityPairId, PredicateId, RelationInstance, TempographError
from tempograph.simmeasures import DEFAULT_MEASURES
from tempograph.timealg import TimeSource

WIN, LOSE, PLAY = "beat", "lose.against", "play"


def random_graph(n_edges=1000, seed=0):
    rng = random.Random(seed)
    nodes = [f"pred{k}" for k in range(60)]
    measures = ("Cosine", "BInc-Count", "T-BInc-Count")
    edges = {}
    while len(edges) < n_edges:
        p, q = rng.sample(nodes, 2)
        edges[(p, q)] = tuple(rng.choice([0.0, 1.0, rng.random(), rng.random() * 1e-9]) for _ in measures)
    return EntailmentGraph(("organization", "organization"), frozenset(nodes), measures, edges,
                           {"source": "both", "window": "4"})


def same(a, b):
    return (a.type_pair, a.nodes, a.measures, a.edges, a.meta) == (b.type_pair, b.nodes, b.measures, b.edges, b.meta)


class TestBuild:
    def test_worked_example_graph(self, worked_corpus):
        g = build_graph(worked_corpus, TimeSource.DOC_DATE_ONLY, 0)
        assert g.nodes == {WIN, LOSE, PLAY}
        assert g.measures == DEFAULT_MEASURES
        assert g.score(WIN, PLAY, "T-BInc-Count") > 0
        assert g.score(LOSE, PLAY, "T-BInc-Count") > 0
        assert g.score(WIN, LOSE, "T-BInc-Count") == 0.0
        assert g.score(LOSE, WIN, "T-BInc-Count") == 0.0
        assert g.score(WIN, LOSE, "BInc-Count") > 0
        assert g.meta == {"source": "docdate", "window": "0", "window_mode": "both", "denominator": "unfiltered"}

    def test_empty_corpus(self):
        with pytest.raises(TempographError):
            build_graph(Corpus([]))

    def test_mixed_types_need_choice(self, worked_corpus):
        other = RelationInstance(PredicateId("born.in", ("person", "location")), EntityPairId("X", "Y"), (), 1, "z")
        mixed = Corpus(list(worked_corpus.instances) + [other])
        with pytest.raises(TempographError, match="type pairs"):
            build_graph(mixed)
        g = build_graph(mixed, type_pair=("organization", "organization"))
        assert len(g.nodes) == 3

    def test_edges_must_use_nodes(self):
        with pytest.raises(ValueError):
            EntailmentGraph(("a", "b"), frozenset({"x"}), ("Cosine",), {("x", "y"): (0.5,)})


class TestSerialization:
    def test_worked_round_trip(self, worked_corpus, tmp_path):
        g = build_graph(worked_corpus)
        write_graph(g, tmp_path / "g.tsv")
        back = read_graph(tmp_path / "g.tsv")
        assert same(g, back)

    def test_random_1k_round_trip(self, tmp_path):
        g = random_graph()
        write_graph(g, tmp_path / "g.tsv")
        back = read_graph(tmp_path / "g.tsv")
        assert same(g, back)
        text = (tmp_path / "g.tsv").read_text()
        assert sum(1 for line in text.splitlines() if line.startswith("E\t")) == len(g.edges) == 1000

    def test_empty_round_trip(self):
        g = EntailmentGraph(("organization", "organization"), frozenset(), DEFAULT_MEASURES)
        back = loads_graph(dumps_graph(g))
        assert same(g, back)

    def test_canonical_bytes(self):
        g = random_graph(seed=3)
        shuffled = list(g.edges.items())
        random.Random(9).shuffle(shuffled)
        h = EntailmentGraph(g.type_pair, frozenset(sorted(g.nodes, reverse=True)), g.measures,
                            dict(shuffled), dict(reversed(list(g.meta.items()))))
        assert dumps_graph(g) == dumps_graph(h)

    def test_gzip(self, tmp_path):
        g = random_graph(200, seed=5)
        write_graph(g, tmp_path / "g.tsv.gz")
        raw = (tmp_path / "g.tsv.gz").read_bytes()
        assert raw[:2] == b"\x1f\x8b"
        assert gzip.decompress(raw).decode() == dumps_graph(g)
        assert same(read_graph(tmp_path / "g.tsv.gz"), g)
        write_graph(g, tmp_path / "again.gz")
        assert (tmp_path / "again.gz").read_bytes() == raw

    @pytest.mark.parametrize("mutate, where", [
        (lambda t: t.replace("#tempograph-graph", "#other"), ":1:"),
        (lambda t: t + "E\tpred1\tpred2\t0.5\n", ":"),
        (lambda t: t + "X\tfoo\n", "unknown record"),
        (lambda t: t + "E\tpred1\tpred2\t0.5\tnan?\tx\n", ":"),
    ])
    def test_malformed(self, mutate, where):
        text = dumps_graph(random_graph(5, seed=1))
        with pytest.raises(GraphFormatError, match=where):
            loads_graph(mutate(text), "g.tsv")

    def test_error_names_line(self):
        text = dumps_graph(random_graph(5, seed=1)).splitlines()
        bad_line = len(text) + 1
        text.append("E\tpred1\tpred2\t0.1")
        with pytest.raises(GraphFormatError, match=f"g.tsv:{bad_line}:"):
            loads_graph("\n".join(text) + "\n", "g.tsv")
